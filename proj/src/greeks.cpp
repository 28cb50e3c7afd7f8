#include "tcub/greeks.hpp"

#include <cmath>

#include "tcub/sampling.hpp"

namespace tcub {

void DeltaConfig::validate(int d) const {
  if (asset_index < 0 || asset_index >= d)
    throw ConfigError("delta: asset index " + std::to_string(asset_index) + " outside [0, " +
                      std::to_string(d) + ")");
  if (nodes < 2) throw ConfigError("delta: need at least 2 interpolation nodes");
  if (!(h > 0 && h < 1)) throw ConfigError("delta: h must lie in (0, 1)");
  if (!(truncation > 0)) throw ConfigError("delta: truncation A must be positive");
  pricing.validate();
}

std::vector<double> delta_node_prices(const ModelSpec& model, const PayoffSpec& payoff,
                                      const DeltaConfig& cfg) {
  model.validate();
  cfg.validate(model.d);
  const double x0 = model.spots[cfg.asset_index];
  const double hw = cfg.half_width(x0);
  if (!(x0 - hw > 0)) throw ConfigError("delta: spot window reaches zero");

  std::vector<double> prices;
  for (double x : tcheb_nodes(x0, hw, cfg.nodes)) {
    ModelSpec bumped = model;
    bumped.spots[cfg.asset_index] = x;
    const double p = price_adaptive(bumped, payoff, cfg.truncation, cfg.pricing).value;
    if (!std::isfinite(p)) throw NumericalError("delta: non-finite node price");
    prices.push_back(p);
  }
  return prices;
}

double delta_tcheb(const ModelSpec& model, const PayoffSpec& payoff, const DeltaConfig& cfg) {
  const auto prices = delta_node_prices(model, payoff, cfg);
  return tcheb_interp_derivative(prices, cfg.half_width(model.spots[cfg.asset_index]));
}

FdDelta delta_mc_fd(const ModelSpec& model, const PayoffSpec& payoff, int asset_index,
                    std::uint64_t n, std::uint64_t seed, bool common_random_numbers) {
  if (n < 2) throw ConfigError("delta_mc_fd: n must be >= 2");
  model.validate();
  if (asset_index < 0 || asset_index >= model.d)
    throw ConfigError("delta_mc_fd: asset index out of range");
  const double step = std::pow(static_cast<double>(n), -1.0 / 6.0);
  ModelSpec up = model, down = model;
  up.spots[asset_index] += 0.5 * step;
  down.spots[asset_index] -= 0.5 * step;
  if (!(down.spots[asset_index] > 0)) throw ConfigError("delta_mc_fd: step larger than spot");

  const Eigen::MatrixXd chol = correlation_cholesky(model.correlation);
  const double disc = model.discount();
  // Independent legs draw the down path from a second stream.
  const std::uint64_t other_seed = seed ^ 0x5DEECE66DULL;
  auto stats = sample_blocks(
      n, seed, model.d, 1, [&](std::uint64_t j, const Eigen::VectorXd& g, Eigen::VectorXd& out) {
        const double pu = tcub::payoff(payoff, up, terminal_price(up, chol, g));
        double pd;
        if (common_random_numbers) {
          pd = tcub::payoff(payoff, down, terminal_price(down, chol, g));
        } else {
          Eigen::VectorXd g2(model.d);
          gaussian_vector(other_seed, j, g2);
          pd = tcub::payoff(payoff, down, terminal_price(down, chol, g2));
        }
        out[0] = disc * (pu - pd) / step;
      });
  return {stats[0].mean, stats[0].ci95(), step};
}

}  // namespace tcub
