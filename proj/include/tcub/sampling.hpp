#pragma once

// Block-parallel Monte Carlo accumulation. Samples are grouped in fixed-size
// blocks; each block is reduced sequentially and blocks are merged in index
// order, so results do not depend on the thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tcub/rng.hpp"

namespace tcub {

struct RunningStats {
  double count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    count += 1;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / n;
    m2 += o.m2 + delta * delta * count * o.count / n;
    count = n;
  }

  double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
  double ci95() const { return count > 0 ? 1.96 * std::sqrt(variance() / count) : 0.0; }
};

inline constexpr std::uint64_t kSampleBlock = 4096;

/// For each sample j < n, fills g with N(0, I_dim) draws of stream `seed` and
/// calls body(j, g, out); returns running statistics of each of the `outputs`
/// entries of out.
template <typename Body>
std::vector<RunningStats> sample_blocks(std::uint64_t n, std::uint64_t seed, int dim, int outputs,
                                        Body&& body) {
  const std::int64_t blocks = static_cast<std::int64_t>((n + kSampleBlock - 1) / kSampleBlock);
  std::vector<std::vector<RunningStats>> partial(blocks, std::vector<RunningStats>(outputs));
#pragma omp parallel
  {
    Eigen::VectorXd g(dim);
    Eigen::VectorXd out(outputs);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::uint64_t begin = static_cast<std::uint64_t>(b) * kSampleBlock;
      const std::uint64_t end = std::min(n, begin + kSampleBlock);
      for (std::uint64_t j = begin; j < end; ++j) {
        gaussian_vector(seed, j, g);
        body(j, g, out);
        for (int k = 0; k < outputs; ++k) partial[b][k].add(out[k]);
      }
    }
  }
  std::vector<RunningStats> total(outputs);
  for (const auto& p : partial)
    for (int k = 0; k < outputs; ++k) total[k].merge(p[k]);
  return total;
}

}  // namespace tcub
