#pragma once

// Multi-asset Black-Scholes model and the truncated Gaussian integrands
//
//   I(A) = int_{[-A,A]^d} psi(S_T(x)) p(x) dx,
//   S_T^i(x) = s^i exp((r - sigma_i^2/2) T + sigma_i sqrt(T) C_i x),
//
// with C the Cholesky factor of the correlation matrix and p the standard
// d-variate normal density.

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "tcub/adaptive.hpp"

namespace tcub {

enum class PayoffKind { BasketCall, BasketPut, DigitalBasket, PutOnMin };

std::string to_string(PayoffKind kind);
PayoffKind payoff_kind_from_string(const std::string& name);

struct PayoffSpec {
  PayoffKind kind = PayoffKind::BasketCall;
};

struct ModelSpec {
  int d = 1;
  Eigen::VectorXd spots;
  Eigen::VectorXd vols;
  double rate = 0;
  double maturity = 1;
  Eigen::MatrixXd correlation;
  Eigen::VectorXd weights;  // basket composition
  double strike = 0;
  std::optional<Eigen::VectorXd> barriers;

  /// Throws ConfigError (or a subclass) on inconsistent fields.
  void validate() const;
  double discount() const;
  /// (r - sigma_i^2 / 2) T
  Eigen::VectorXd log_drift() const;
};

/// Homogeneous model helper: equal spots and vols, weights 1/d, equicorrelation rho.
ModelSpec make_homogeneous(int d, double spot, double vol, double rate, double maturity,
                           double rho, double strike);

/// Gamma_ij = delta_ij + rho (1 - delta_ij), rho in (-1/(d-1), 1).
Eigen::MatrixXd equicorrelation(int d, double rho);

/// Lower Cholesky factor; rejects non-symmetric, non-unit-diagonal or indefinite input.
Eigen::MatrixXd correlation_cholesky(const Eigen::MatrixXd& gamma);

Eigen::VectorXd terminal_price(const ModelSpec& model, const Eigen::VectorXd& g);
Eigen::VectorXd terminal_price(const ModelSpec& model, const Eigen::MatrixXd& chol,
                               const Eigen::VectorXd& g);

double payoff(const PayoffSpec& spec, const ModelSpec& model, const Eigen::VectorXd& s);

/// Payoff of every column of `s` (d x n terminal prices).
Eigen::VectorXd payoff_batch(const PayoffSpec& spec, const ModelSpec& model,
                             const Eigen::MatrixXd& s);

/// psi(S_T(x)) p(x) on [-A, A]^d, evaluated in batches of points.
class Integrand {
 public:
  Integrand(ModelSpec model, PayoffSpec payoff, double truncation);

  Eigen::VectorXd operator()(const Eigen::MatrixXd& x) const;

  Box<double> domain() const { return Box<double>::cube(model_.d, truncation_); }
  const Eigen::MatrixXd& cholesky() const { return chol_; }
  const ModelSpec& model() const { return model_; }

 private:
  ModelSpec model_;
  PayoffSpec payoff_;
  double truncation_;
  Eigen::MatrixXd chol_;
  Eigen::MatrixXd loading_;  // diag(sigma sqrt T) C
  Eigen::VectorXd drift_;
  double norm_const_;
};

/// Standard d-variate normal density at every column of x.
Eigen::VectorXd gaussian_density(const Eigen::MatrixXd& x);

struct Estimate {
  double value = 0;
  double uncertainty = 0;  // error indicator, Err, or 95% CI half-width
  Eigen::Index eval_count = 0;
};

/// e^{-rT} times the adaptive integral of the truncated integrand.
Estimate price_adaptive(const ModelSpec& model, const PayoffSpec& payoff, double truncation,
                        const AdaptiveConfig<double>& config);

/// Same, keeping the full adaptive result (mesh included), undiscounted.
AdaptiveResult<double> integrate_price(const ModelSpec& model, const PayoffSpec& payoff,
                                       double truncation, const AdaptiveConfig<double>& config);

/// Discounted statistics over `runs` GRS replications.
ReplicationStats<double> price_replications(
    const ModelSpec& model, const PayoffSpec& payoff, double truncation,
    const AdaptiveConfig<double>& config, int runs,
    const std::function<void(int, const AdaptiveResult<double>&)>& on_run = {});

/// |V - U - sum_i lambda_i s^i + K e^{-rT}|
double parity_residual(double call, double put, const ModelSpec& model);

double bs_closed_form_1d(const ModelSpec& model, const PayoffSpec& payoff);
double bs_delta_1d(const ModelSpec& model, const PayoffSpec& payoff);

/// Crude Monte Carlo with a 95% CI half-width as uncertainty.
Estimate mc_price(const ModelSpec& model, const PayoffSpec& payoff, std::uint64_t n,
                  std::uint64_t seed);

}  // namespace tcub
