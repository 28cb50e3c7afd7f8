#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tcub/presets.hpp"
#include "tcub/reduction_cv.hpp"

using namespace tcub;

namespace {

AdaptiveConfig<double> small_cfg(Eigen::Index n = 200) {
  AdaptiveConfig<double> c;
  c.iterations = n;
  c.q1 = 8;
  c.q2 = 12;
  return c;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2 / ((1 - z * z) * dp * dp);
  }
}

}  // namespace

TEST_CASE("spectrum of a two-asset equicorrelated model") {
  const auto m = make_homogeneous(2, 50, 0.3, 0.05, 1, 0.4, 45);
  const auto pca = build_pca(m);
  CHECK(pca.eigvals[0] == doctest::Approx(0.09 * 1.4).epsilon(1e-14));
  CHECK(pca.eigvals[1] == doctest::Approx(0.09 * 0.6).epsilon(1e-14));
  CHECK((pca.eigvecs * pca.eigvecs.transpose() - Eigen::Matrix2d::Identity()).norm() < 1e-10);
}

TEST_CASE("independent assets") {
  auto m = make_homogeneous(3, 50, 0.2, 0.05, 1, 0.0, 45);
  m.vols << 0.1, 0.3, 0.2;
  const auto pca = build_pca(m);
  CHECK(pca.eigvals[0] == doctest::Approx(0.09));
  CHECK(pca.eigvals[1] == doctest::Approx(0.04));
  CHECK(pca.eigvals[2] == doctest::Approx(0.01));
  CHECK((pca.sqrt_sigma - Eigen::Vector3d(0.1, 0.3, 0.2).asDiagonal().toDenseMatrix()).norm() < 1e-14);
}

TEST_CASE("square root of the block covariance") {
  const auto pca = build_pca(find_preset("ex20").model);
  CHECK((pca.sqrt_sigma * pca.sqrt_sigma - pca.sigma).norm() < 1e-10);
  CHECK((pca.sqrt_sigma - pca.sqrt_sigma.transpose()).norm() < 1e-14);
  CHECK((pca.eigvecs * pca.eigvecs.transpose() - Eigen::MatrixXd::Identity(10, 10)).norm() < 1e-10);
  for (int k = 1; k < 10; ++k) CHECK(pca.eigvals[k] <= pca.eigvals[k - 1]);
  CHECK(pca.eigvals[9] > 0);
}

TEST_CASE("non-positive covariance is rejected") {
  auto m = make_homogeneous(2, 50, 0.2, 0.05, 1, 0.0, 45);
  m.correlation << 1, 1, 1, 1;
  CHECK_THROWS_AS(build_pca(m), Error);
}

TEST_CASE("reduced terminal prices") {
  const auto& p = find_preset("ex17");
  const auto pca = build_pca(p.model);
  const Eigen::VectorXd g = (Eigen::VectorXd(5) << 0.3, -1.2, 0.7, 2.0, -0.4).finished();

  // Full model: H-parameterization at P^t g equals loading at g.
  const Eigen::VectorXd via_h = (p.model.spots.array() *
      (p.model.log_drift() + std::sqrt(p.model.maturity) * pca.sqrt_sigma * (pca.eigvecs.transpose() * g))
          .array().exp()).matrix();
  CHECK((reduced_terminal(pca, p.model, g, 5) - via_h).norm() < 1e-10);

  // Same law as the Cholesky model: both have covariance Sigma T.
  const Eigen::MatrixXd lc = p.model.vols.asDiagonal() * correlation_cholesky(p.model.correlation);
  CHECK((lc * lc.transpose() - pca.loading * pca.loading.transpose()).norm() < 1e-12);

  const Eigen::VectorXd det = (p.model.spots.array() * p.model.log_drift().array().exp()).matrix();
  CHECK((reduced_terminal(pca, p.model, g, 0) - det).norm() < 1e-12);
  CHECK_THROWS_AS(reduced_terminal(pca, p.model, g, 6), ConfigError);
}

TEST_CASE("first component dominates at high correlation") {
  CHECK(build_pca(find_preset("ex17").model).explained_variance(1) > 0.9);
  CHECK(build_pca(find_preset("ex18").model).explained_variance(1) < 0.9);
}

TEST_CASE("one-dimensional control against Gauss-Legendre") {
  const auto& p = find_preset("ex17");
  const auto pca = build_pca(p.model);
  const auto ctl = control_expectation(pca, p.model, p.payoff, 1, 12.0, small_cfg(300));

  // The payoff kink splits the line; integrate each piece with many panels.
  std::vector<double> x, w;
  gauss_legendre(40, x, w);
  double oracle = 0;
  const int panels = 2000;
  for (int k = 0; k < panels; ++k) {
    const double a = -12 + 24.0 * k / panels, b = a + 24.0 / panels;
    for (int i = 0; i < 40; ++i) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
      Eigen::MatrixXd g(1, 1);
      g(0, 0) = t;
      const auto s = reduced_terminal_batch(pca, p.model, g, 1);
      oracle += 0.5 * (b - a) * w[i] * payoff_batch(p.payoff, p.model, s)[0] *
                std::exp(-0.5 * t * t) / std::sqrt(2 * std::numbers::pi);
    }
  }
  oracle *= p.model.discount();
  CHECK(std::abs(ctl.value - oracle) <= 1e-8);
}

TEST_CASE("control variate estimator") {
  const auto& p = find_preset("ex17");
  const auto pca = build_pca(p.model);
  const std::uint64_t n = 20000;

  const auto e0 = cv_estimator(pca, p.model, p.payoff, 0, n, 4, 12.0, small_cfg());
  CHECK(e0.control_evals == 1);
  CHECK(e0.ci_half_width == doctest::Approx(e0.crude_ci_half_width).epsilon(0.2));

  double prev = 1e300;
  for (int l = 0; l <= 3; ++l) {
    const auto e = cv_estimator(pca, p.model, p.payoff, l, n, 4, 12.0, small_cfg());
    CHECK(e.ci_half_width < prev);
    CHECK(e.ci_half_width >= 0);
    prev = e.ci_half_width;
  }

  ControlValue fake{8.5, 0.0, 0};
  const auto full = cv_estimate_with_control(pca, p.model, p.payoff, 5, n, 4, fake);
  CHECK(full.ci_half_width == 0.0);
  CHECK(full.value == 8.5);

  CHECK_THROWS_AS(cv_estimator(pca, p.model, p.payoff, 2, 1, 4, 12.0, small_cfg()), ConfigError);
  CHECK_THROWS_AS(cv_estimator(pca, p.model, p.payoff, 6, n, 4, 12.0, small_cfg()), ConfigError);
}

TEST_CASE("control variate and crude estimates agree on paired draws") {
  const auto& p = find_preset("ex18");
  const auto pca = build_pca(p.model);
  const auto control = control_expectation(pca, p.model, p.payoff, 1, 12.0, small_cfg(300));
  int agree = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto e = cv_estimate_with_control(pca, p.model, p.payoff, 1, 5000, seed, control);
    agree += std::abs(e.value - e.crude_value) < e.ci_half_width + e.crude_ci_half_width;
  }
  CHECK(agree >= 95);
}
