#pragma once

// Counter-based random numbers: every (seed, sample, slot) triple maps to a
// fixed value, so parallel substreams need no shared state.

#include <array>
#include <cstdint>

#include <Eigen/Dense>

namespace tcub {

/// Philox4x32-10 block cipher (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Inverse of the standard normal CDF (Wichura's AS241, ~1e-16 relative).
double inverse_normal_cdf(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Fills `out` with independent N(0,1) draws for sample `sample` of stream `seed`.
void gaussian_vector(std::uint64_t seed, std::uint64_t sample, Eigen::Ref<Eigen::VectorXd> out);

/// Uniform (0,1) draw number `slot` of sample `sample`.
double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot);

}  // namespace tcub
