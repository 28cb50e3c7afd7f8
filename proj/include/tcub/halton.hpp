#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "tcub/errors.hpp"

namespace tcub {

inline std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int n = 2; static_cast<int>(primes.size()) < count; ++n) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > n) break;
      if (n % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(n);
  }
  return primes;
}

template <typename Scalar>
Scalar radical_inverse(std::uint64_t index, int base) {
  Scalar value(0);
  Scalar scale = Scalar(1) / Scalar(base);
  const Scalar inv_base = scale;
  while (index > 0) {
    value += Scalar(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return value;
}

/// First `count` Halton points in [0,1]^d (bases = first d primes, index from 1).
/// Returned as a d x count matrix, one point per column.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> halton_points(Eigen::Index count, int d) {
  if (count < 1 || d < 1) throw ConfigError("halton_points: count and dimension must be >= 1");
  const auto bases = first_primes(d);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pts(d, count);
  for (Eigen::Index i = 0; i < count; ++i)
    for (int k = 0; k < d; ++k)
      pts(k, i) = radical_inverse<Scalar>(static_cast<std::uint64_t>(i + 1), bases[k]);
  return pts;
}

/// Halton points pushed to the product arcsine (Tchebychef) density by x = cos(pi u).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> tcheb_distributed_points(Eigen::Index count,
                                                                               int d) {
  auto pts = halton_points<Scalar>(count, d);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return pts.unaryExpr([pi](Scalar u) { return std::cos(pi * u); });
}

}  // namespace tcub
