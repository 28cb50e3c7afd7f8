#include <iostream>

#include "tcub/cli.hpp"

int main(int argc, char** argv) { return tcub::run_cli(argc, argv, std::cout, std::cerr); }
