#pragma once

// Named example configurations: ex1..ex20 and the basket configurations of
// the parity tables (t1-k1 ... t4-k2), plus a one-dimensional call (bs1d).

#include <string>
#include <vector>

#include "tcub/model.hpp"

namespace tcub {

struct Preset {
  std::string name;
  std::string description;
  ModelSpec model;
  PayoffSpec payoff;
  double truncation = 12.0;  // A
  int alpha = 3;
};

const std::vector<Preset>& presets();

/// Case-insensitive lookup; throws ConfigError listing the known names.
const Preset& find_preset(const std::string& name);

/// 10 x 10 two-block correlation used by ex20.
Eigen::MatrixXd block_correlation_ex20();

}  // namespace tcub
