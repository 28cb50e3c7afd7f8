#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "tcub/errors.hpp"
#include "tcub/model.hpp"

namespace tcub {

/// Tchebychef-Gauss nodes of [center - half_width, center + half_width].
inline std::vector<double> tcheb_nodes(double center, double half_width, int m) {
  std::vector<double> x(m);
  for (int k = 0; k < m; ++k)
    x[k] = center + half_width * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * m));
  return x;
}

/// Derivative at `center` of the degree m-1 polynomial interpolating the node
/// values `f` (given at tcheb_nodes(center, half_width, m), same order).
inline double tcheb_interp_derivative(const std::vector<double>& f, double half_width) {
  const int m = static_cast<int>(f.size());
  // Discrete orthogonality at Gauss nodes: c_j = (2/m) sum_k f_k T_j(t_k).
  // At t = 0, T_j'(0) = j sin(j pi / 2).
  double dp = 0;
  for (int j = 1; j < m; j += 2) {
    double c = 0;
    for (int k = 0; k < m; ++k) c += f[k] * std::cos(j * (2.0 * k + 1.0) * std::numbers::pi / (2.0 * m));
    c *= 2.0 / m;
    dp += c * j * ((j / 2) % 2 == 0 ? 1.0 : -1.0);
  }
  return dp / half_width;
}

/// Interpolation derivative of an arbitrary scalar function.
template <typename F>
double tcheb_derivative(F&& f, double center, double half_width, int m) {
  if (m < 2) throw ConfigError("tcheb_derivative: need at least 2 nodes");
  if (!(half_width > 0)) throw ConfigError("tcheb_derivative: half width must be positive");
  std::vector<double> values;
  values.reserve(m);
  for (double x : tcheb_nodes(center, half_width, m)) values.push_back(f(x));
  return tcheb_interp_derivative(values, half_width);
}

struct DeltaConfig {
  int asset_index = 0;
  int nodes = 5;      // m
  double h = 0.1;     // half-width of the spot window
  bool relative_window = false;  // window x0 (1 +- h) instead of x0 +- h
  double truncation = 12.0;
  AdaptiveConfig<double> pricing;

  void validate(int d) const;
  double half_width(double spot) const { return relative_window ? h * spot : h; }
};

/// Delta with respect to spots[asset_index] from GRS prices at m nodes.
double delta_tcheb(const ModelSpec& model, const PayoffSpec& payoff, const DeltaConfig& cfg);

/// Node prices used by delta_tcheb, in node order (exposed for diagnostics).
std::vector<double> delta_node_prices(const ModelSpec& model, const PayoffSpec& payoff,
                                      const DeltaConfig& cfg);

struct FdDelta {
  double value = 0;
  double ci_half_width = 0;
  double step = 0;
};

/// Central finite difference of Monte Carlo prices with step h_n = n^{-1/6}.
/// With common_random_numbers the up and down legs share Gaussian draws.
FdDelta delta_mc_fd(const ModelSpec& model, const PayoffSpec& payoff, int asset_index,
                    std::uint64_t n, std::uint64_t seed, bool common_random_numbers = true);

}  // namespace tcub
