#pragma once

// Adaptive cubature driver. The cell with the largest error indicator is
// repeatedly bisected, either along the axis that minimises the children's
// indicators (FAS) or uniformly at random among the longest axes (GRS).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <omp.h>

#include "tcub/quadrature.hpp"

namespace tcub {

enum class Strategy { FAS, GRS };

inline const char* to_string(Strategy s) { return s == Strategy::FAS ? "fas" : "grs"; }

template <typename Scalar = double>
struct AdaptiveConfig {
  Strategy strategy = Strategy::GRS;
  Eigen::Index iterations = 2000;
  int q1 = 18;
  int q2 = 24;
  int alpha = 3;
  std::uint64_t seed = 0;
  // Stop early once the summed indicator drops to this value; 0 disables.
  Scalar tolerance = 0;
  Eigen::Index max_regions = 20'000'000;

  void validate() const {
    if (q1 < 1 || q2 <= q1) throw ConfigError("adaptive: require 1 <= q1 < q2");
    if (iterations < 1) throw ConfigError("adaptive: iterations must be >= 1");
    if (alpha < 1) throw ConfigError("adaptive: alpha must be >= 1");
    if (iterations + 1 > max_regions)
      throw ConfigError("adaptive: " + std::to_string(iterations + 1) +
                        " regions exceed the configured budget of " + std::to_string(max_regions));
    if (tolerance < 0) throw ConfigError("adaptive: tolerance must be >= 0");
  }
};

template <typename Scalar = double>
struct HyperRectangle {
  Box<Scalar> box;
  QuadratureResult<Scalar> coarse;  // level q1
  QuadratureResult<Scalar> fine;    // level q2
  Scalar indicator = 0;
};

template <typename Scalar = double>
struct AdaptiveResult {
  Scalar estimate = 0;
  Scalar total_indicator = 0;
  Eigen::Index eval_count = 0;
  Eigen::Index iterations = 0;
  std::vector<HyperRectangle<Scalar>> mesh;
};

/// |Q_q1 - Q_q2| + sum over the leading coefficients of |b_q1 - b_q2|, the
/// coefficient quadratures carrying the same vol(R) / 2^d factor as Q.
template <typename Scalar>
Scalar error_indicator(const QuadratureResult<Scalar>& r1, const QuadratureResult<Scalar>& r2) {
  return std::abs(r1.integral_estimate - r2.integral_estimate) +
         r2.cell_scale * (r1.leading_coeffs - r2.leading_coeffs).cwiseAbs().sum();
}

/// Rules for the two levels of the hierarchical indicator.
template <typename Scalar = double>
struct RulePair {
  std::shared_ptr<const QuadratureRule<Scalar>> coarse;
  std::shared_ptr<const QuadratureRule<Scalar>> fine;

  static RulePair from_cache(int d, const AdaptiveConfig<Scalar>& cfg) {
    auto& cache = RuleCache<Scalar>::instance();
    return {cache.get(d, cfg.q1, cfg.alpha), cache.get(d, cfg.q2, cfg.alpha)};
  }
  Eigen::Index evals_per_cell() const { return coarse->size() + fine->size(); }
};

template <typename Scalar, typename F>
HyperRectangle<Scalar> evaluate_cell(Box<Scalar> box, F&& f, const RulePair<Scalar>& rules) {
  HyperRectangle<Scalar> cell;
  cell.coarse = apply_rule(*rules.coarse, f, box);
  cell.fine = apply_rule(*rules.fine, f, box);
  cell.indicator = error_indicator(cell.coarse, cell.fine);
  cell.box = std::move(box);
  return cell;
}

template <typename Scalar = double>
struct Split {
  HyperRectangle<Scalar> first;
  HyperRectangle<Scalar> second;
  int direction = -1;
};

/// Tries every bisection axis and keeps the one with the smallest summed
/// child indicator. Ties go to the lowest axis.
template <typename Scalar, typename F>
Split<Scalar> split_fas(const HyperRectangle<Scalar>& rect, F&& f, const RulePair<Scalar>& rules) {
  Split<Scalar> best;
  Scalar best_sum = std::numeric_limits<Scalar>::infinity();
  for (int axis = 0; axis < rect.box.dim(); ++axis) {
    auto [lo, hi] = rect.box.bisect(axis);
    auto c1 = evaluate_cell(std::move(lo), f, rules);
    auto c2 = evaluate_cell(std::move(hi), f, rules);
    const Scalar sum = c1.indicator + c2.indicator;
    if (best.direction < 0 || sum < best_sum) {
      best_sum = sum;
      best = {std::move(c1), std::move(c2), axis};
    }
  }
  return best;
}

/// Axes whose length is within a relative 1e-12 of the longest one.
template <typename Scalar>
std::vector<int> admissible_directions(const Box<Scalar>& box) {
  const VectorX<Scalar> len = box.lengths();
  const Scalar cut = len.maxCoeff() * (Scalar(1) - Scalar(1e-12));
  std::vector<int> dirs;
  for (int k = 0; k < box.dim(); ++k)
    if (len[k] >= cut) dirs.push_back(k);
  return dirs;
}

/// Picks the GRS bisection axis uniformly among the admissible ones.
template <typename Scalar>
int grs_direction(const Box<Scalar>& box, std::mt19937_64& rng) {
  const auto dirs = admissible_directions(box);
  if (dirs.size() == 1) return dirs.front();
  return dirs[rng() % dirs.size()];
}

/// Geometric GRS split; children are returned unevaluated.
template <typename Scalar>
std::tuple<Box<Scalar>, Box<Scalar>, int> split_grs(const Box<Scalar>& box, std::mt19937_64& rng) {
  const int axis = grs_direction(box, rng);
  auto [lo, hi] = box.bisect(axis);
  return {std::move(lo), std::move(hi), axis};
}

/// Called before each split with the popped cell and the cells left in the list.
template <typename Scalar>
using SplitObserver =
    std::function<void(const HyperRectangle<Scalar>&, const std::vector<HyperRectangle<Scalar>>&)>;

template <typename Scalar, typename F>
AdaptiveResult<Scalar> integrate_adaptive(F&& f, const Box<Scalar>& domain,
                                          const AdaptiveConfig<Scalar>& cfg,
                                          const SplitObserver<Scalar>& observe = {}) {
  cfg.validate();
  if (!domain.valid()) throw ConfigError("integrate_adaptive: degenerate domain");
  const int d = domain.dim();
  const auto rules = RulePair<Scalar>::from_cache(d, cfg);
  const Eigen::Index per_cell = rules.evals_per_cell();

  auto by_indicator = [](const HyperRectangle<Scalar>& a, const HyperRectangle<Scalar>& b) {
    return a.indicator < b.indicator;
  };
  std::mt19937_64 rng(cfg.seed);

  AdaptiveResult<Scalar> out;
  auto& heap = out.mesh;
  heap.reserve(static_cast<std::size_t>(cfg.iterations + 1));
  heap.push_back(evaluate_cell(domain, f, rules));
  out.eval_count = per_cell;

  auto summed_indicator = [&heap] {
    Scalar s = 0;
    for (const auto& c : heap) s += c.indicator;
    return s;
  };

  for (Eigen::Index it = 0; it < cfg.iterations; ++it) {
    if (cfg.tolerance > 0 && summed_indicator() <= cfg.tolerance) break;
    std::pop_heap(heap.begin(), heap.end(), by_indicator);
    HyperRectangle<Scalar> cell = std::move(heap.back());
    heap.pop_back();
    if (observe) observe(cell, heap);

    if (cfg.strategy == Strategy::FAS) {
      auto s = split_fas(cell, f, rules);
      out.eval_count += 2 * d * per_cell;
      heap.push_back(std::move(s.first));
      std::push_heap(heap.begin(), heap.end(), by_indicator);
      heap.push_back(std::move(s.second));
    } else {
      auto [lo, hi, axis] = split_grs(cell.box, rng);
      (void)axis;
      out.eval_count += 2 * per_cell;
      heap.push_back(evaluate_cell(std::move(lo), f, rules));
      std::push_heap(heap.begin(), heap.end(), by_indicator);
      heap.push_back(evaluate_cell(std::move(hi), f, rules));
    }
    std::push_heap(heap.begin(), heap.end(), by_indicator);
    ++out.iterations;
  }

  for (const auto& c : heap) {
    out.estimate += c.fine.integral_estimate;
    out.total_indicator += c.indicator;
  }
  return out;
}

template <typename Scalar = double>
struct ReplicationStats {
  Scalar mean = 0;
  Scalar median = 0;
  Scalar std_dev = 0;  // unbiased
  std::vector<Scalar> per_run;
  std::vector<Eigen::Index> region_counts;
  Eigen::Index eval_count = 0;
};

template <typename Scalar>
ReplicationStats<Scalar> summarize(std::vector<Scalar> values) {
  ReplicationStats<Scalar> st;
  const auto n = values.size();
  st.per_run = values;
  if (n == 0) return st;
  for (Scalar v : values) st.mean += v;
  st.mean /= Scalar(n);
  if (n > 1) {
    Scalar ss = 0;
    for (Scalar v : values) ss += (v - st.mean) * (v - st.mean);
    st.std_dev = std::sqrt(ss / Scalar(n - 1));
  }
  std::sort(values.begin(), values.end());
  st.median = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / Scalar(2);
  return st;
}

/// Independent GRS runs with seeds cfg.seed + 0 .. runs-1. `on_run` (optional)
/// sees every full result, e.g. to check mesh invariants.
template <typename Scalar, typename F>
ReplicationStats<Scalar> run_replications(
    F&& f, const Box<Scalar>& domain, const AdaptiveConfig<Scalar>& cfg, int runs,
    const std::function<void(int, const AdaptiveResult<Scalar>&)>& on_run = {}) {
  if (cfg.strategy != Strategy::GRS) throw ConfigError("run_replications: requires GRS");
  if (runs < 2) throw ConfigError("run_replications: runs must be >= 2");
  cfg.validate();
  RulePair<Scalar>::from_cache(domain.dim(), cfg);  // build rules before going parallel

  std::vector<Scalar> values(runs);
  std::vector<Eigen::Index> counts(runs), evals(runs);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < runs; ++i) {
    try {
      auto c = cfg;
      c.seed = cfg.seed + static_cast<std::uint64_t>(i);
      auto res = integrate_adaptive(f, domain, c);
      values[i] = res.estimate;
      counts[i] = static_cast<Eigen::Index>(res.mesh.size());
      evals[i] = res.eval_count;
      if (on_run) {
#pragma omp critical(tcub_on_run)
        on_run(i, res);
      }
    } catch (...) {
#pragma omp critical(tcub_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  auto st = summarize(std::move(values));
  st.region_counts = std::move(counts);
  for (auto e : evals) st.eval_count += e;
  return st;
}

/// One CSV record per leaf: lo_1..lo_d, hi_1..hi_d, indicator, estimate.
template <typename Scalar>
void write_mesh_csv(const AdaptiveResult<Scalar>& res, std::ostream& os) {
  if (res.mesh.empty()) return;
  const int d = res.mesh.front().box.dim();
  for (int k = 1; k <= d; ++k) os << "lo_" << k << ',';
  for (int k = 1; k <= d; ++k) os << "hi_" << k << ',';
  os << "indicator,estimate\n";
  os << std::setprecision(17);
  for (const auto& c : res.mesh) {
    for (int k = 0; k < d; ++k) os << c.box.lower[k] << ',';
    for (int k = 0; k < d; ++k) os << c.box.upper[k] << ',';
    os << c.indicator << ',' << c.fine.integral_estimate << '\n';
  }
}

template <typename Scalar>
void export_mesh(const AdaptiveResult<Scalar>& res, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("export_mesh: cannot open '" + path + "' for writing");
  write_mesh_csv(res, os);
  if (!os) throw Error("export_mesh: write failed for '" + path + "'");
}

}  // namespace tcub
