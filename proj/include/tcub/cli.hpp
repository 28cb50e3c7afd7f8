#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace tcub {

/// Entry point of the `tcub` tool. Returns the process exit code:
/// 0 success, 2 configuration error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// GRS iteration budget 2000 d scale (at least one split).
Eigen::Index default_iterations(int d, double scale);

struct TableOptions {
  double scale = 1.0;
  std::uint64_t seed = 0;
  int runs = 10;
  std::optional<Eigen::Index> iterations;  // overrides the 2000 d scale budget
  std::optional<std::uint64_t> samples;    // overrides Monte Carlo sample counts
};

std::vector<std::string> table_ids();

/// Runs one benchmark table. Progress lines go to `log`; the report has one
/// entry per check with computed and reference values and a pass flag.
nlohmann::json run_table(const std::string& id, const TableOptions& opt, std::ostream& log);

}  // namespace tcub
