#include "tcub/presets.hpp"

#include <algorithm>
#include <cctype>

#include "tcub/errors.hpp"

namespace tcub {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

Preset make(std::string name, std::string desc, ModelSpec m, PayoffKind kind, double A = 12.0,
            int alpha = 3) {
  Preset p;
  p.name = std::move(name);
  p.description = std::move(desc);
  p.model = std::move(m);
  p.payoff.kind = kind;
  p.truncation = A;
  p.alpha = alpha;
  return p;
}

// Parity-table baskets carry unit weights.
ModelSpec unit_basket(int d, double spot, double vol, double r, double T, double rho, double K) {
  ModelSpec m = make_homogeneous(d, spot, vol, r, T, rho, K);
  m.weights.setOnes();
  return m;
}

ModelSpec digital(int d, double rho, double K) {
  ModelSpec m = make_homogeneous(d, 50, 0.2, 0.05, 1, rho, K);
  m.barriers = Eigen::VectorXd::Constant(d, 60);
  return m;
}

ModelSpec five_asset(double rho) {
  ModelSpec m = make_homogeneous(5, 50, 0.2, 0.05, 1, rho, 45);
  m.vols << 0.156, 0.442, 0.325, 0.134, 0.114;
  return m;
}

std::vector<Preset> build() {
  using K = PayoffKind;
  std::vector<Preset> v;
  v.push_back(make("bs1d", "d=1 call, s=50, K=45, sigma=0.2, r=0.05, T=1",
                   make_homogeneous(1, 50, 0.2, 0.05, 1, 0, 45), K::BasketCall));

  const double t1k[] = {100, 127.80, 300};
  for (int i = 0; i < 3; ++i) {
    v.push_back(make("t1-k" + std::to_string(i + 1), "d=2 basket, sigma=0.4, rho=0.3, T=3",
                     unit_basket(2, 50, 0.4, 0.05, 3, 0.3, t1k[i]), K::BasketCall));
    v.push_back(make("t2-k" + std::to_string(i + 1), "d=2 basket, sigma=0.2, rho=0.7, T=3",
                     unit_basket(2, 50, 0.2, 0.05, 3, 0.7, t1k[i]), K::BasketCall));
  }
  const double t3k[] = {90, 120}, t4k[] = {80, 90};
  for (int i = 0; i < 2; ++i) {
    v.push_back(make("t3-k" + std::to_string(i + 1), "d=3 basket, independent, sigma=0.2, T=3",
                     unit_basket(3, 30, 0.2, 0.05, 3, 0.0, t3k[i]), K::BasketCall));
    v.push_back(make("t4-k" + std::to_string(i + 1), "d=4 basket, independent, sigma=0.1, T=1",
                     unit_basket(4, 20, 0.1, 0.05, 1, 0.0, t4k[i]), K::BasketCall, 5.0));
  }

  for (int d = 2; d <= 4; ++d) {
    const int ex = 2 * d - 3;
    v.push_back(make("ex" + std::to_string(ex), "put on min, d=" + std::to_string(d) + ", rho=0.1, K=45",
                     make_homogeneous(d, 50, 0.2, 0.05, 1, 0.1, 45), K::PutOnMin));
    v.push_back(make("ex" + std::to_string(ex + 1),
                     "put on min, d=" + std::to_string(d) + ", rho=0.9, K=55",
                     make_homogeneous(d, 50, 0.2, 0.05, 1, 0.9, 55), K::PutOnMin));
  }

  v.push_back(make("ex7", "digital, d=2, rho=0.1, K=45, U=60", digital(2, 0.1, 45),
                   K::DigitalBasket, 12, 3));
  v.push_back(make("ex8", "digital, d=2, rho=0.9, K=55, U=60", digital(2, 0.9, 55),
                   K::DigitalBasket, 12, 15));
  v.push_back(make("ex9", "digital, d=3, rho=0.1, K=45, U=60", digital(3, 0.1, 45),
                   K::DigitalBasket, 12, 20));
  v.push_back(make("ex10", "digital, d=3, rho=0.9, K=55, U=60", digital(3, 0.9, 55),
                   K::DigitalBasket, 12, 40));
  v.push_back(make("ex11", "digital, d=4, rho=0.1, K=45, U=60", digital(4, 0.1, 45),
                   K::DigitalBasket, 12, 30));
  v.push_back(make("ex12", "digital, d=4, rho=0.9, K=55, U=60", digital(4, 0.9, 55),
                   K::DigitalBasket, 5, 40));

  v.push_back(make("ex13", "basket call, d=3, rho=0.1, K=45",
                   make_homogeneous(3, 50, 0.2, 0.05, 1, 0.1, 45), K::BasketCall));
  v.push_back(make("ex14", "put on min, d=3, rho=0.5, K=55",
                   make_homogeneous(3, 50, 0.2, 0.05, 1, 0.5, 55), K::PutOnMin));
  v.push_back(make("ex15", "basket call, d=4, rho=0.1, K=45",
                   make_homogeneous(4, 50, 0.2, 0.05, 1, 0.1, 45), K::BasketCall));
  v.push_back(make("ex16", "put on min, d=4, rho=0.5, K=55",
                   make_homogeneous(4, 50, 0.2, 0.05, 1, 0.5, 55), K::PutOnMin));

  v.push_back(make("ex17", "basket call, d=5, rho=0.9, K=45", five_asset(0.9), K::BasketCall));
  v.push_back(make("ex18", "basket call, d=5, rho=0.1, K=45", five_asset(0.1), K::BasketCall));
  v.push_back(make("ex19", "basket call, d=5, rho=-0.1, K=45", five_asset(-0.1), K::BasketCall));

  ModelSpec ex20 = make_homogeneous(10, 100, 0.2, 0.02, 2, 0.0, 105);
  ex20.correlation = block_correlation_ex20();
  v.push_back(make("ex20", "basket call, d=10, two-block correlation, K=105", ex20,
                   K::BasketCall));
  return v;
}

}  // namespace

Eigen::MatrixXd block_correlation_ex20() {
  Eigen::MatrixXd g(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const bool a = i < 5, b = j < 5;
      g(i, j) = i == j ? 1.0 : (a != b ? -0.5 : (a ? 0.8 : 0.4));
    }
  return g;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& find_preset(const std::string& name) {
  const std::string key = lower(name);
  for (const auto& p : presets())
    if (p.name == key) return p;
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace tcub
