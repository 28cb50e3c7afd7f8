#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tcub/errors.hpp"
#include "tcub/index_basis.hpp"

using namespace tcub;

namespace {

// Brute force over [0, q]^d.
std::size_t brute_force_count(int d, int q) {
  std::vector<int> m(d, 0);
  std::size_t count = 0;
  while (true) {
    long long prod = 1;
    for (int v : m) prod *= std::max(1, v);
    if (prod <= q) ++count;
    int k = 0;
    while (k < d && ++m[k] > q) m[k++] = 0;
    if (k == d) break;
  }
  return count;
}

}  // namespace

TEST_CASE("small index sets") {
  const auto w = build_index_set(1, 5);
  REQUIRE(w.size() == 6);
  for (int k = 0; k <= 5; ++k) CHECK(w[k] == MultiIndex{k});

  const auto b = build_index_set(3, 1);
  CHECK(b.size() == 8);
  for (const auto& m : b.members())
    for (int v : m) CHECK((v == 0 || v == 1));
}

TEST_CASE("cardinalities match brute force enumeration") {
  for (int d = 1; d <= 4; ++d)
    for (int q : {1, 2, 5, 8, 12, 18, 24}) {
      const auto w = build_index_set(d, q);
      CHECK(w.size() == brute_force_count(d, q));
      for (const auto& m : w.members()) CHECK(in_hyperbolic_cross(m, q));
    }
  CHECK(build_index_set(2, 24).size() == 133);
  CHECK(3 * build_index_set(2, 24).size() + 4 == 403);
  CHECK(build_index_set(3, 24).size() == 528);
  CHECK(build_index_set(4, 24).size() == 1821);
}

TEST_CASE("members ordered by total degree then lexicographically, nested in q") {
  const auto w = build_index_set(3, 12);
  auto key = [](const MultiIndex& m) {
    int s = 0;
    for (int v : m) s += v;
    return std::make_pair(s, m);
  };
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(key(w[i - 1]) < key(w[i]));
  const auto big = build_index_set(3, 18);
  for (const auto& m : w.members()) CHECK(big.find(m).has_value());
}

TEST_CASE("leading positions are the zero index then the unit indices") {
  const auto w = build_index_set(3, 8);
  const auto pos = w.leading_positions();
  REQUIRE(pos.size() == 4);
  CHECK(w[pos[0]] == MultiIndex{0, 0, 0});
  CHECK(w[pos[1]] == MultiIndex{1, 0, 0});
  CHECK(w[pos[2]] == MultiIndex{0, 1, 0});
  CHECK(w[pos[3]] == MultiIndex{0, 0, 1});
}

TEST_CASE("invalid arguments are rejected") {
  CHECK_THROWS_AS(build_index_set(0, 3), ConfigError);
  CHECK_THROWS_AS(build_index_set(2, 0), ConfigError);
  CHECK_THROWS_AS(build_index_set(-1, 3), ConfigError);
}

TEST_CASE("Chebyshev values") {
  CHECK(tcheb_eval(0, 0.7) == 1.0);
  CHECK(tcheb_eval(3, 0.5) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(tcheb_eval(7, std::cos(std::numbers::pi / 7)) == doctest::Approx(-1.0).epsilon(1e-14));
  for (int m = 0; m <= 50; ++m)
    for (int i = 1; i < 400; ++i) {
      const double x = -1.0 + i / 200.0;
      const double t = tcheb_eval(m, x);
      CHECK(std::abs(t) <= 1.0 + 1e-12);
      CHECK(std::abs(t - std::cos(m * std::acos(x))) <= 1e-12);
    }
  double table[9];
  tcheb_table(0.3, 9, table);
  for (int m = 0; m < 9; ++m) CHECK(table[m] == doctest::Approx(tcheb_eval(m, 0.3)));
}

TEST_CASE("basis integrals") {
  CHECK(basis_integral<double>({0, 0}) == 4.0);
  CHECK(basis_integral<double>({1, 0}) == 0.0);
  CHECK(basis_integral<double>({2, 2}) == doctest::Approx(4.0 / 9.0));
  // Odd components vanish; even ones follow 2 / (1 - m^2), checked by midpoint sums.
  for (int m = 0; m <= 12; ++m) {
    const int n = 200000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += tcheb_eval(m, -1.0 + (i + 0.5) * 2.0 / n);
    s *= 2.0 / n;
    CHECK(tcheb_integral_1d<double>(m) == doctest::Approx(s).epsilon(1e-8));
  }
  const auto w = build_index_set(3, 12);
  for (const auto& m : w.members()) {
    bool odd = false;
    for (int v : m) odd = odd || (v % 2);
    if (odd) CHECK(basis_integral<double>(m) == 0.0);
  }
}
