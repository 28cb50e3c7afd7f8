#include <doctest.h>

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tcub/rng.hpp"
#include "tcub/sampling.hpp"

using namespace tcub;

TEST_CASE("Philox4x32-10 known answers") {
  // Random123 kat_vectors.
  const auto z = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(z == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  const auto f = philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
  CHECK(f == std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  const auto p = philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  CHECK(p == std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal distribution functions") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  // Round trip through the lower tail, where p keeps full relative precision.
  for (double x = -8; x <= 0.5; x += 0.37)
    CHECK(inverse_normal_cdf(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-12));
  for (double p : {1e-10, 0.01, 0.3, 0.7, 0.99})
    CHECK(inverse_normal_cdf(1 - p) == doctest::Approx(-inverse_normal_cdf(p)).epsilon(1e-6));
  CHECK(inverse_normal_cdf(1e-300) < -37);
}

TEST_CASE("uniform and Gaussian draws") {
  RunningStats u, g;
  Eigen::VectorXd v(3);
  int outside = 0;
  for (std::uint64_t j = 0; j < 200000; ++j) {
    const double x = uniform01(5, j, 0);
    outside += !(x > 0 && x < 1);
    u.add(x);
    gaussian_vector(5, j, v);
    g.add(v[2]);
  }
  CHECK(outside == 0);
  CHECK(std::abs(u.mean - 0.5) < 3e-3);
  CHECK(std::abs(u.variance() - 1.0 / 12) < 1e-3);
  CHECK(std::abs(g.mean) < 1e-2);
  CHECK(std::abs(g.variance() - 1.0) < 1e-2);

  Eigen::VectorXd a(4), b(4);
  gaussian_vector(1, 7, a);
  gaussian_vector(1, 7, b);
  CHECK(a == b);
  gaussian_vector(2, 7, b);
  CHECK(a != b);
}

TEST_CASE("running statistics merge exactly like a single pass") {
  RunningStats all, left, right;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i * 1.7) * 10;
    all.add(x);
    (i < 37 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-14));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-13));
}

TEST_CASE("block sampling does not depend on the thread count") {
  auto run = [] {
    return sample_blocks(50000, 11, 2, 1, [](std::uint64_t, const Eigen::VectorXd& g, Eigen::VectorXd& out) {
      out[0] = std::exp(g[0]) + g[1] * g[1];
    });
  };
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = run();
  omp_set_num_threads(4);
  const auto four = run();
  omp_set_num_threads(saved);
#else
  const auto one = run();
  const auto four = run();
#endif
  CHECK(one[0].mean == four[0].mean);
  CHECK(one[0].m2 == four[0].m2);
  CHECK(one[0].count == 50000);
}
