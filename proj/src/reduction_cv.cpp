#include "tcub/reduction_cv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tcub/sampling.hpp"

namespace tcub {

double PCAModel::explained_variance(int l) const {
  return eigvals.head(l).sum() / eigvals.sum();
}

PCAModel build_pca(const ModelSpec& model) {
  model.validate();
  PCAModel pca;
  pca.sigma = model.vols.asDiagonal() * model.correlation * model.vols.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pca.sigma);
  if (es.info() != Eigen::Success) throw NumericalError("build_pca: eigensolver failed");

  const int d = model.d;
  // Eigen returns ascending eigenvalues; reverse to non-increasing order.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return es.eigenvalues()[a] > es.eigenvalues()[b];
  });
  pca.eigvals.resize(d);
  pca.eigvecs.resize(d, d);
  for (int k = 0; k < d; ++k) {
    pca.eigvals[k] = es.eigenvalues()[order[k]];
    pca.eigvecs.row(k) = es.eigenvectors().col(order[k]).transpose();
  }
  if (!(pca.eigvals[d - 1] > 0))
    throw NonPositiveEigenvalue("build_pca: covariance has a non-positive eigenvalue");

  const Eigen::VectorXd root = pca.eigvals.cwiseSqrt();
  pca.loading = pca.eigvecs.transpose() * root.asDiagonal();
  pca.sqrt_sigma = pca.loading * pca.eigvecs;
  return pca;
}

Eigen::MatrixXd reduced_terminal_batch(const PCAModel& pca, const ModelSpec& model,
                                       const Eigen::MatrixXd& g, int l) {
  const int d = pca.dim();
  if (l < 0 || l > d) throw ConfigError("reduced_terminal: l must lie in [0, d]");
  if (g.rows() < l) throw ConfigError("reduced_terminal: not enough coordinates");
  Eigen::MatrixXd logs = std::sqrt(model.maturity) * (pca.loading.leftCols(l) * g.topRows(l));
  logs.colwise() += model.log_drift();
  return model.spots.asDiagonal() * logs.array().exp().matrix();
}

Eigen::VectorXd reduced_terminal(const PCAModel& pca, const ModelSpec& model,
                                 const Eigen::VectorXd& g, int l) {
  return reduced_terminal_batch(pca, model, g, l).col(0);
}

ControlValue control_expectation(const PCAModel& pca, const ModelSpec& model,
                                 const PayoffSpec& payoff, int l, double truncation,
                                 const AdaptiveConfig<double>& config) {
  if (l < 0 || l > pca.dim()) throw ConfigError("control_expectation: l must lie in [0, d]");
  const double disc = model.discount();
  if (l == 0) {
    const Eigen::MatrixXd s = reduced_terminal_batch(pca, model, Eigen::MatrixXd(0, 1), 0);
    return {disc * payoff_batch(payoff, model, s)[0], 0.0, 1};
  }
  if (!(truncation > 0)) throw ConfigError("control_expectation: truncation must be positive");
  auto f = [&](const Eigen::MatrixXd& x) -> Eigen::VectorXd {
    const Eigen::MatrixXd s = reduced_terminal_batch(pca, model, x, l);
    return (payoff_batch(payoff, model, s).array() * gaussian_density(x).array()).matrix();
  };
  const auto res = integrate_adaptive(f, Box<double>::cube(l, truncation), config);
  return {disc * res.estimate, disc * res.total_indicator, res.eval_count};
}

CVEstimate cv_estimate_with_control(const PCAModel& pca, const ModelSpec& model,
                                    const PayoffSpec& payoff, int l, std::uint64_t n,
                                    std::uint64_t seed, const ControlValue& control) {
  if (n < 2) throw ConfigError("cv_estimator: n must be >= 2");
  if (l < 0 || l > pca.dim()) throw ConfigError("cv_estimator: l must lie in [0, d]");
  const double disc = model.discount();
  const int d = pca.dim();
  // outputs: psi(S) - psi(S_hat), psi(S)
  auto stats = sample_blocks(
      n, seed, d, 2, [&](std::uint64_t, const Eigen::VectorXd& g, Eigen::VectorXd& out) {
        const Eigen::VectorXd full = reduced_terminal(pca, model, g, d);
        const double p = disc * tcub::payoff(payoff, model, full);
        double ph = p;
        if (l < d) ph = disc * tcub::payoff(payoff, model, reduced_terminal(pca, model, g, l));
        out[0] = p - ph;
        out[1] = p;
      });
  CVEstimate cv;
  cv.n = n;
  cv.l = l;
  cv.control_value = control.value;
  cv.control_evals = control.eval_count;
  cv.value = stats[0].mean + control.value;
  cv.ci_half_width = stats[0].ci95();
  cv.crude_value = stats[1].mean;
  cv.crude_ci_half_width = stats[1].ci95();
  const double vd = stats[0].variance();
  cv.variance_ratio = vd > 0 ? stats[1].variance() / vd : std::numeric_limits<double>::infinity();
  return cv;
}

CVEstimate cv_estimator(const PCAModel& pca, const ModelSpec& model, const PayoffSpec& payoff,
                        int l, std::uint64_t n, std::uint64_t seed, double truncation,
                        const AdaptiveConfig<double>& config) {
  const auto control = control_expectation(pca, model, payoff, l, truncation, config);
  return cv_estimate_with_control(pca, model, payoff, l, n, seed, control);
}

}  // namespace tcub
