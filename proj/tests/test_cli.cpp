#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcub/cli.hpp"

using namespace tcub;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tcub");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("help and argument errors") {
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  for (const char* flag : {"--config", "--strategy", "--iters", "--q1", "--q2", "--alpha", "--A",
                           "--runs", "--seed", "--components", "--samples", "--out", "--threads",
                           "--scale"})
    CHECK_MESSAGE(help.out.find(flag) != std::string::npos, flag);

  CHECK(run({}).code == 2);
  CHECK(run({"price", "--preset", "bs1d", "--bogus"}).code == 2);
  CHECK(run({"price", "--preset", "nope"}).code == 2);
  CHECK(run({"price", "--preset", "bs1d", "--strategy", "random"}).code == 2);
  CHECK(run({"price", "--preset", "bs1d", "--q1", "12", "--q2", "8"}).code == 2);
  CHECK(run({"price", "--preset", "bs1d", "--scale", "1.5"}).code == 2);
  CHECK(run({"price", "--config", "/nonexistent/m.json"}).code == 2);
  CHECK(run({"delta", "--preset", "ex13", "--asset", "3"}).code == 2);
  CHECK(run({"table", "t99"}).code == 2);
  CHECK(run({"cv", "--preset", "ex17", "--components", "6"}).code == 2);
  CHECK(run({"price", "--preset", "ex1", "--strategy", "fas", "--runs", "3"}).code == 2);
}

TEST_CASE("numerical failures exit with code 3") {
  const auto path = temp_file("tcub_overflow.json",
      R"({"d": 1, "spots": 1e307, "vols": 0.5, "rate": 0.05, "maturity": 1, "strike": 45})");
  const auto r = run({"price", "--config", path.string(), "--iters", "5", "--q1", "8", "--q2", "12"});
  CHECK(r.code == 3);
  CHECK(r.err.find("not finite") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("price output") {
  const auto r = run({"price", "--preset", "bs1d", "--iters", "200", "--q1", "8", "--q2", "12"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(std::abs(doc["result"]["price"].get<double>() - 8.349724204208002) <= 1e-8);
  CHECK(doc["closed_form"].get<double>() == doctest::Approx(8.349724204208002));
  CHECK(doc["rules"]["M_q2"].get<int>() == 3 * 13 + 2);

  // Byte-identical reruns.
  CHECK(run({"price", "--preset", "bs1d", "--iters", "200", "--q1", "8", "--q2", "12"}).out == r.out);

  const auto reps = json::parse(run({"price", "--preset", "ex1", "--iters", "100", "--q1", "8",
                                     "--q2", "12", "--runs", "3"}).out);
  CHECK(reps["result"]["per_run"].size() == 3);
  CHECK(reps["result"].contains("median"));

  const auto par = json::parse(run({"price", "--preset", "t1-k1", "--iters", "200", "--parity"}).out);
  CHECK(par["parity"]["residual"].get<double>() < 1e-3);
}

TEST_CASE("deterministic model through a JSON config") {
  const auto path = temp_file("tcub_det.json",
      R"({"d": 2, "spots": [40, 60], "vols": 1e-9, "rate": 0.05, "maturity": 1,
          "correlation": {"matrix": [[1, 0.2], [0.2, 1]]}, "weights": [0.5, 0.5], "strike": 30})");
  // The payoff is constant; only the Gaussian weight has to be resolved.
  const auto r = run({"price", "--config", path.string(), "--iters", "400"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["result"]["price"].get<double>() == doctest::Approx(50 - 30 * std::exp(-0.05)).epsilon(1e-8));
  CHECK(doc["result"]["error_indicator"].get<double>() < 1e-8);
  CHECK(run({"price", "--config", path.string(), "--preset", "bs1d"}).code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("delta output") {
  const auto r = run({"delta", "--preset", "bs1d", "--iters", "200", "--q1", "8", "--q2", "12",
                      "--nodes", "5", "--hw", "0.1"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["node_prices"].size() == 5);
  CHECK(std::abs(doc["delta"].get<double>() - doc["closed_form_delta"].get<double>()) <= 1e-5);
}

TEST_CASE("cv output") {
  const auto r = run({"cv", "--preset", "ex17", "--components", "0,1,5", "--samples", "5000",
                      "--iters", "100", "--q1", "8", "--q2", "12"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  REQUIRE(doc["estimates"].size() == 3);
  CHECK(doc["estimates"][2]["ci95"].get<double>() == 0.0);
  CHECK(doc["estimates"][1]["ci95"].get<double>() < doc["estimates"][0]["ci95"].get<double>());
  CHECK(doc["eigenvalues"].size() == 5);
}

TEST_CASE("mesh export") {
  const auto r = run({"mesh", "--preset", "ex1", "--iters", "30", "--q1", "8", "--q2", "12"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lo_1,lo_2,hi_1,hi_2,indicator,estimate");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 31);

  const auto path = std::filesystem::temp_directory_path() / "tcub_mesh.csv";
  CHECK(run({"mesh", "--preset", "ex1", "--iters", "30", "--q1", "8", "--q2", "12", "--out",
             path.string()}).code == 0);
  CHECK(std::filesystem::file_size(path) == r.out.size());
  std::filesystem::remove(path);
}

TEST_CASE("table harness at small scale") {
  const auto r = run({"table", "t1", "--scale", "0.05", "--q1", "8", "--q2", "12"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc.contains("checks"));
  CHECK(!doc["checks"].empty());
  CHECK(r.err.find("[") != std::string::npos);
  CHECK(table_ids().size() == 13);
}

TEST_CASE("thread settings") {
  CHECK(run({"price", "--preset", "bs1d", "--iters", "10", "--threads", "0"}).code == 2);
  ::setenv("CUBATURE_THREADS", "abc", 1);
  CHECK(run({"price", "--preset", "bs1d", "--iters", "10"}).code == 2);
  ::setenv("CUBATURE_THREADS", "2", 1);
  const auto a = run({"price", "--preset", "ex1", "--iters", "50", "--runs", "3"});
  ::setenv("CUBATURE_THREADS", "1", 1);
  const auto b = run({"price", "--preset", "ex1", "--iters", "50", "--runs", "3"});
  ::unsetenv("CUBATURE_THREADS");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}
