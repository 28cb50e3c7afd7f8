#include "tcub/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tcub/errors.hpp"
#include "tcub/rng.hpp"
#include "tcub/sampling.hpp"

namespace tcub {

std::string to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::BasketCall: return "basket_call";
    case PayoffKind::BasketPut: return "basket_put";
    case PayoffKind::DigitalBasket: return "digital_basket";
    case PayoffKind::PutOnMin: return "put_on_min";
  }
  return "unknown";
}

PayoffKind payoff_kind_from_string(const std::string& name) {
  if (name == "basket_call" || name == "call") return PayoffKind::BasketCall;
  if (name == "basket_put" || name == "put") return PayoffKind::BasketPut;
  if (name == "digital_basket" || name == "digital") return PayoffKind::DigitalBasket;
  if (name == "put_on_min" || name == "min_put") return PayoffKind::PutOnMin;
  throw ConfigError("unknown payoff '" + name + "'");
}

void ModelSpec::validate() const {
  if (d < 1) throw ConfigError("model: d must be >= 1");
  auto check_len = [this](const Eigen::VectorXd& v, const char* name) {
    if (v.size() != d)
      throw ConfigError(std::string("model: ") + name + " has " + std::to_string(v.size()) +
                        " entries, expected " + std::to_string(d));
  };
  check_len(spots, "spots");
  check_len(vols, "vols");
  check_len(weights, "weights");
  if ((spots.array() <= 0).any()) throw ConfigError("model: spots must be positive");
  if ((vols.array() < 0).any()) throw ConfigError("model: vols must be non-negative");
  if (!(maturity > 0)) throw ConfigError("model: maturity must be positive");
  if (!(strike > 0)) throw ConfigError("model: strike must be positive");
  if (correlation.rows() != d || correlation.cols() != d)
    throw ConfigError("model: correlation must be d x d");
  if (barriers) {
    check_len(*barriers, "barriers");
    if ((barriers->array() <= 0).any()) throw ConfigError("model: barriers must be positive");
  }
  correlation_cholesky(correlation);
}

double ModelSpec::discount() const { return std::exp(-rate * maturity); }

Eigen::VectorXd ModelSpec::log_drift() const {
  return ((rate - 0.5 * vols.array().square()) * maturity).matrix();
}

ModelSpec make_homogeneous(int d, double spot, double vol, double rate, double maturity,
                           double rho, double strike) {
  ModelSpec m;
  m.d = d;
  m.spots = Eigen::VectorXd::Constant(d, spot);
  m.vols = Eigen::VectorXd::Constant(d, vol);
  m.rate = rate;
  m.maturity = maturity;
  m.correlation = equicorrelation(d, rho);
  m.weights = Eigen::VectorXd::Constant(d, 1.0 / d);
  m.strike = strike;
  return m;
}

Eigen::MatrixXd equicorrelation(int d, double rho) {
  if (d < 1) throw ConfigError("equicorrelation: d must be >= 1");
  const double lower = d > 1 ? -1.0 / (d - 1) : -1.0;
  if (d > 1 && !(rho > lower && rho < 1.0)) {
    std::ostringstream msg;
    msg << "equicorrelation: rho=" << rho << " outside (" << lower << ", 1) for d=" << d;
    throw CorrelationOutOfRange(msg.str());
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(d, d, rho);
  g.diagonal().setOnes();
  correlation_cholesky(g);
  return g;
}

Eigen::MatrixXd correlation_cholesky(const Eigen::MatrixXd& gamma) {
  if (gamma.rows() != gamma.cols()) throw CorrelationOutOfRange("correlation: not square");
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw CorrelationOutOfRange("correlation: not symmetric");
  if (((gamma.diagonal().array() - 1.0).abs() > 1e-14).any())
    throw CorrelationOutOfRange("correlation: diagonal must be 1");
  Eigen::LLT<Eigen::MatrixXd> llt(gamma);
  if (llt.info() != Eigen::Success) throw CorrelationOutOfRange("correlation: not positive definite");
  return llt.matrixL();
}

Eigen::VectorXd terminal_price(const ModelSpec& model, const Eigen::MatrixXd& chol,
                               const Eigen::VectorXd& g) {
  const Eigen::VectorXd z = chol * g;
  return (model.spots.array() *
          (model.log_drift().array() + model.vols.array() * std::sqrt(model.maturity) * z.array())
              .exp())
      .matrix();
}

Eigen::VectorXd terminal_price(const ModelSpec& model, const Eigen::VectorXd& g) {
  return terminal_price(model, correlation_cholesky(model.correlation), g);
}

Eigen::VectorXd payoff_batch(const PayoffSpec& spec, const ModelSpec& model,
                             const Eigen::MatrixXd& s) {
  const double K = model.strike;
  switch (spec.kind) {
    case PayoffKind::BasketCall:
      return ((model.weights.transpose() * s).array() - K).max(0.0).matrix().transpose();
    case PayoffKind::BasketPut:
      return (K - (model.weights.transpose() * s).array()).max(0.0).matrix().transpose();
    case PayoffKind::PutOnMin:
      return (K - s.colwise().minCoeff().array()).max(0.0).matrix().transpose();
    case PayoffKind::DigitalBasket: {
      if (!model.barriers) throw MissingBarriers("digital basket payoff requires barriers");
      Eigen::VectorXd v =
          ((model.weights.transpose() * s).array() - K).max(0.0).matrix().transpose();
      for (Eigen::Index j = 0; j < s.cols(); ++j)
        if ((s.col(j).array() > model.barriers->array()).any()) v[j] = 0.0;
      return v;
    }
  }
  return Eigen::VectorXd::Zero(s.cols());
}

double payoff(const PayoffSpec& spec, const ModelSpec& model, const Eigen::VectorXd& s) {
  return payoff_batch(spec, model, s)[0];
}

Eigen::VectorXd gaussian_density(const Eigen::MatrixXd& x) {
  const double c = std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(x.rows()));
  return (c * (-0.5 * x.colwise().squaredNorm().array()).exp()).matrix().transpose();
}

Integrand::Integrand(ModelSpec model, PayoffSpec payoff, double truncation)
    : model_(std::move(model)), payoff_(payoff), truncation_(truncation) {
  model_.validate();
  if (payoff_.kind == PayoffKind::DigitalBasket && !model_.barriers)
    throw MissingBarriers("digital basket payoff requires barriers");
  if (!(truncation_ > 0)) throw ConfigError("integrand: truncation A must be positive");
  chol_ = correlation_cholesky(model_.correlation);
  loading_ = (model_.vols * std::sqrt(model_.maturity)).asDiagonal() * chol_;
  drift_ = model_.log_drift();
  norm_const_ = std::pow(2.0 * std::numbers::pi, -0.5 * model_.d);
}

Eigen::VectorXd Integrand::operator()(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd logs = loading_ * x;
  logs.colwise() += drift_;
  const Eigen::MatrixXd s = model_.spots.asDiagonal() * logs.array().exp().matrix();
  const Eigen::VectorXd psi = payoff_batch(payoff_, model_, s);
  return (psi.array() *
          (norm_const_ * (-0.5 * x.colwise().squaredNorm().array()).exp()).transpose())
      .matrix();
}

AdaptiveResult<double> integrate_price(const ModelSpec& model, const PayoffSpec& payoff,
                                       double truncation, const AdaptiveConfig<double>& config) {
  const Integrand f(model, payoff, truncation);
  return integrate_adaptive(f, f.domain(), config);
}

Estimate price_adaptive(const ModelSpec& model, const PayoffSpec& payoff, double truncation,
                        const AdaptiveConfig<double>& config) {
  const auto res = integrate_price(model, payoff, truncation, config);
  const double disc = model.discount();
  return {disc * res.estimate, disc * res.total_indicator, res.eval_count};
}

ReplicationStats<double> price_replications(
    const ModelSpec& model, const PayoffSpec& payoff, double truncation,
    const AdaptiveConfig<double>& config, int runs,
    const std::function<void(int, const AdaptiveResult<double>&)>& on_run) {
  const Integrand f(model, payoff, truncation);
  auto st = run_replications(f, f.domain(), config, runs, on_run);
  const double disc = model.discount();
  for (auto& v : st.per_run) v *= disc;
  auto out = summarize(st.per_run);
  out.region_counts = std::move(st.region_counts);
  out.eval_count = st.eval_count;
  return out;
}

double parity_residual(double call, double put, const ModelSpec& model) {
  return std::abs(call - put - model.weights.dot(model.spots) + model.strike * model.discount());
}

namespace {

void require_1d_vanilla(const ModelSpec& model, const PayoffSpec& payoff, const char* who) {
  if (model.d != 1) throw UnsupportedDimension(std::string(who) + ": closed form needs d = 1");
  if (payoff.kind != PayoffKind::BasketCall && payoff.kind != PayoffKind::BasketPut)
    throw UnsupportedDimension(std::string(who) + ": closed form only for calls and puts");
}

}  // namespace

double bs_closed_form_1d(const ModelSpec& model, const PayoffSpec& payoff) {
  require_1d_vanilla(model, payoff, "bs_closed_form_1d");
  // A weighted single asset is a plain option on lambda * S.
  const double lambda = model.weights[0];
  const double s = lambda * model.spots[0];
  const double K = model.strike, T = model.maturity, r = model.rate;
  const double disc_k = K * std::exp(-r * T);
  const double vol_t = model.vols[0] * std::sqrt(T);
  const bool call = payoff.kind == PayoffKind::BasketCall;
  if (!(s > 0)) return call ? 0.0 : disc_k;
  if (vol_t == 0.0) return call ? std::max(s - disc_k, 0.0) : std::max(disc_k - s, 0.0);
  const double d1 = (std::log(s / K) + (r + 0.5 * model.vols[0] * model.vols[0]) * T) / vol_t;
  const double d2 = d1 - vol_t;
  if (call) return s * normal_cdf(d1) - disc_k * normal_cdf(d2);
  return disc_k * normal_cdf(-d2) - s * normal_cdf(-d1);
}

double bs_delta_1d(const ModelSpec& model, const PayoffSpec& payoff) {
  require_1d_vanilla(model, payoff, "bs_delta_1d");
  const double lambda = model.weights[0];
  const double s = lambda * model.spots[0];
  const double K = model.strike, T = model.maturity, r = model.rate;
  const double vol_t = model.vols[0] * std::sqrt(T);
  const bool call = payoff.kind == PayoffKind::BasketCall;
  double n1;
  if (vol_t == 0.0)
    n1 = s > K * std::exp(-r * T) ? 1.0 : 0.0;
  else
    n1 = normal_cdf((std::log(s / K) + (r + 0.5 * model.vols[0] * model.vols[0]) * T) / vol_t);
  return lambda * (call ? n1 : n1 - 1.0);
}

Estimate mc_price(const ModelSpec& model, const PayoffSpec& payoff, std::uint64_t n,
                  std::uint64_t seed) {
  if (n < 2) throw ConfigError("mc_price: n must be >= 2");
  model.validate();
  const Eigen::MatrixXd chol = correlation_cholesky(model.correlation);
  const double disc = model.discount();
  auto stats = sample_blocks(n, seed, model.d, 1,
                             [&](std::uint64_t, const Eigen::VectorXd& g, Eigen::VectorXd& out) {
                               out[0] = disc * tcub::payoff(payoff, model,
                                                            terminal_price(model, chol, g));
                             });
  return {stats[0].mean, stats[0].ci95(), static_cast<Eigen::Index>(n)};
}

}  // namespace tcub
