#pragma once

// Principal component reduction of the log-price covariance and the control
// variate estimator built on it.
//
// With Sigma = diag(sigma) Gamma diag(sigma) = P^t D P (rows of P are
// eigenvectors, D sorted decreasingly), the terminal prices can be written
//
//   S_T^i = s^i exp((r - sigma_i^2/2) T + sqrt(T) (P^t D^{1/2} G)_i),
//
// and the reduced model keeps only the first l principal coordinates of G.
// The expectation of the reduced payoff is computed by GRS on [-A, A]^l and
// used as a control for plain Monte Carlo on the full model.

#include <cstdint>

#include <Eigen/Dense>

#include "tcub/errors.hpp"
#include "tcub/model.hpp"

namespace tcub {

struct PCAModel {
  Eigen::MatrixXd sigma;        // diag(vol) Gamma diag(vol)
  Eigen::MatrixXd eigvecs;      // P, one eigenvector per row
  Eigen::VectorXd eigvals;      // diagonal of D, non-increasing
  Eigen::MatrixXd sqrt_sigma;   // H = P^t D^{1/2} P, symmetric, H H = Sigma
  Eigen::MatrixXd loading;      // P^t D^{1/2}; column k is the k-th component

  int dim() const { return static_cast<int>(eigvals.size()); }
  /// Fraction of total variance carried by the first l components.
  double explained_variance(int l) const;
};

PCAModel build_pca(const ModelSpec& model);

/// Terminal prices driven by the first l principal coordinates of g (the rest
/// are zeroed). l = d gives the full model.
Eigen::VectorXd reduced_terminal(const PCAModel& pca, const ModelSpec& model,
                                 const Eigen::VectorXd& g, int l);

/// Batch version over the columns of g (d x n or l x n; missing rows are zero).
Eigen::MatrixXd reduced_terminal_batch(const PCAModel& pca, const ModelSpec& model,
                                       const Eigen::MatrixXd& g, int l);

struct ControlValue {
  double value = 0;  // discounted E[psi(S_hat)]
  double uncertainty = 0;
  Eigen::Index eval_count = 0;
};

/// Discounted expectation of the reduced payoff by GRS over [-A, A]^l.
ControlValue control_expectation(const PCAModel& pca, const ModelSpec& model,
                                 const PayoffSpec& payoff, int l, double truncation,
                                 const AdaptiveConfig<double>& config);

struct CVEstimate {
  double value = 0;
  double ci_half_width = 0;
  double control_value = 0;
  std::uint64_t n = 0;
  int l = 0;
  double variance_ratio = 0;  // Var(psi(S)) / Var(psi(S) - psi(S_hat)), paired draws
  double crude_value = 0;     // plain MC on the same draws
  double crude_ci_half_width = 0;
  Eigen::Index control_evals = 0;
};

/// Control variate estimate with an already computed control value.
CVEstimate cv_estimate_with_control(const PCAModel& pca, const ModelSpec& model,
                                    const PayoffSpec& payoff, int l, std::uint64_t n,
                                    std::uint64_t seed, const ControlValue& control);

CVEstimate cv_estimator(const PCAModel& pca, const ModelSpec& model, const PayoffSpec& payoff,
                        int l, std::uint64_t n, std::uint64_t seed, double truncation,
                        const AdaptiveConfig<double>& config);

}  // namespace tcub
