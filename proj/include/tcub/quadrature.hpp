#pragma once

// Least-squares Tchebychef quadrature on hyperrectangles.
//
// A rule Q(d, q, alpha) fits the reduced model sum_{m in W(d,q)} b_m T_m(x) to
// M = alpha * |W(d,q)| + 2^d reference nodes (Tchebychef-distributed Halton
// points plus the corners of [-1,1]^d). The pseudo-inverse of the design matrix
// is folded once into weight rows: one row for the integral and one row for
// each of the d+1 leading coefficients (constant and first-order terms).

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tcub/errors.hpp"
#include "tcub/halton.hpp"
#include "tcub/index_basis.hpp"

namespace tcub {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Axis-aligned box [lower, upper].
template <typename Scalar = double>
struct Box {
  VectorX<Scalar> lower;
  VectorX<Scalar> upper;

  Box() = default;
  Box(VectorX<Scalar> lo, VectorX<Scalar> hi) : lower(std::move(lo)), upper(std::move(hi)) {}

  static Box cube(int d, Scalar half_width) {
    return Box(VectorX<Scalar>::Constant(d, -half_width), VectorX<Scalar>::Constant(d, half_width));
  }

  int dim() const { return static_cast<int>(lower.size()); }
  VectorX<Scalar> lengths() const { return upper - lower; }
  VectorX<Scalar> center() const { return (upper + lower) / Scalar(2); }
  Scalar volume() const { return (upper - lower).prod(); }
  bool valid() const {
    return lower.size() > 0 && lower.size() == upper.size() && ((upper - lower).array() > 0).all();
  }

  std::pair<Box, Box> bisect(int axis) const {
    const Scalar mid = (lower[axis] + upper[axis]) / Scalar(2);
    Box a = *this, b = *this;
    a.upper[axis] = mid;
    b.lower[axis] = mid;
    return {std::move(a), std::move(b)};
  }
};

template <typename Scalar = double>
struct QuadratureRule {
  int dim = 0;
  int level = 0;
  int alpha = 0;
  IndexSet index_set;
  MatrixX<Scalar> points;            // d x M reference nodes; last 2^d columns are the corners
  VectorX<Scalar> integral_weights;  // M
  MatrixX<Scalar> coeff_weights;     // (d+1) x M, rows follow IndexSet::leading_positions()
  Scalar condition_number = 0;

  // [integral_weights^T; coeff_weights], so one product yields every estimate.
  MatrixX<Scalar> stacked;

  Eigen::Index size() const { return points.cols(); }
};

template <typename Scalar = double>
struct QuadratureResult {
  Scalar integral_estimate = 0;
  VectorX<Scalar> leading_coeffs;  // d+1
  Scalar cell_scale = 1;           // vol(R) / 2^d
  Eigen::Index eval_count = 0;
};

/// Design matrix A(i, j) = T_{m_j}(x_i) with x_i the columns of `points`.
template <typename Scalar>
MatrixX<Scalar> design_matrix(const IndexSet& set, const MatrixX<Scalar>& points) {
  const int d = set.dim();
  const int q = set.level();
  const Eigen::Index M = points.cols();
  const auto L = static_cast<Eigen::Index>(set.size());
  MatrixX<Scalar> A(M, L);
  MatrixX<Scalar> table(q + 1, d);
  for (Eigen::Index i = 0; i < M; ++i) {
    for (int k = 0; k < d; ++k) tcheb_table<Scalar>(points(k, i), q, table.col(k).data());
    for (Eigen::Index j = 0; j < L; ++j) {
      const auto& m = set[static_cast<std::size_t>(j)];
      Scalar v = table(m[0], 0);
      for (int k = 1; k < d; ++k) v *= table(m[k], k);
      A(i, j) = v;
    }
  }
  return A;
}

/// Reference nodes: alpha*L Tchebychef-distributed Halton points, then the 2^d corners.
template <typename Scalar>
MatrixX<Scalar> rule_nodes(int d, Eigen::Index interior) {
  const Eigen::Index corners = Eigen::Index(1) << d;
  MatrixX<Scalar> pts(d, interior + corners);
  pts.leftCols(interior) = tcheb_distributed_points<Scalar>(interior, d);
  for (Eigen::Index c = 0; c < corners; ++c)
    for (int k = 0; k < d; ++k) pts(k, interior + c) = ((c >> k) & 1) ? Scalar(1) : Scalar(-1);
  return pts;
}

/// Least-squares rule on caller-supplied nodes (d x M, M >= L).
template <typename Scalar = double>
QuadratureRule<Scalar> build_rule_from_nodes(IndexSet set, MatrixX<Scalar> nodes, int alpha = 0) {
  const int d = set.dim();
  const int q = set.level();
  const auto L = static_cast<Eigen::Index>(set.size());
  if (nodes.rows() != d) throw ConfigError("build_rule: node dimension mismatch");
  if (nodes.cols() < L) throw ConfigError("build_rule: fewer nodes than basis functions");

  QuadratureRule<Scalar> rule;
  rule.dim = d;
  rule.level = q;
  rule.alpha = alpha;
  rule.index_set = std::move(set);
  rule.points = std::move(nodes);
  const Eigen::Index M = rule.points.cols();

  MatrixX<Scalar> A = design_matrix<Scalar>(rule.index_set, rule.points);
  Eigen::HouseholderQR<Eigen::Ref<MatrixX<Scalar>>> qr(A);
  const MatrixX<Scalar> R = qr.matrixQR().topRows(L).template triangularView<Eigen::Upper>();

  // A and R share singular values: rank and conditioning come from R.
  const VectorX<Scalar> sv = Eigen::BDCSVD<MatrixX<Scalar>>(R).singularValues();
  const Scalar smax = sv(0);
  const Scalar tol = Scalar(1e-10) * smax;
  const Eigen::Index rank = (sv.array() > tol).count();
  if (rank < L || !(smax > 0)) {
    std::ostringstream msg;
    msg << "build_rule(d=" << d << ", q=" << q << ", M=" << M << "): numerical rank "
        << rank << " < " << L << " basis functions";
    throw RankDeficient(msg.str());
  }
  rule.condition_number = smax / sv(L - 1);

  // Columns of C select what the weight rows estimate: the integral of the
  // model, then the leading coefficients b_m for m in A_d.
  MatrixX<Scalar> C = MatrixX<Scalar>::Zero(L, d + 2);
  for (Eigen::Index j = 0; j < L; ++j)
    C(j, 0) = basis_integral<Scalar>(rule.index_set[static_cast<std::size_t>(j)]);
  const auto lead = rule.index_set.leading_positions();
  for (int k = 0; k <= d; ++k) C(static_cast<Eigen::Index>(lead[k]), k + 1) = Scalar(1);

  // C^T A^+ = C^T R^{-1} Q1^T = (Q [R^{-T} C; 0])^T
  MatrixX<Scalar> Z = MatrixX<Scalar>::Zero(M, d + 2);
  Z.topRows(L) = R.transpose().template triangularView<Eigen::Lower>().solve(C);
  MatrixX<Scalar> W = qr.householderQ() * Z;

  rule.stacked = W.transpose();
  rule.integral_weights = rule.stacked.row(0).transpose();
  rule.coeff_weights = rule.stacked.bottomRows(d + 1);
  return rule;
}

template <typename Scalar = double>
QuadratureRule<Scalar> build_rule(int d, int q, int alpha) {
  if (d < 1 || d > 20) throw ConfigError("build_rule: dimension out of range");
  if (alpha < 1) throw ConfigError("build_rule: alpha must be >= 1");
  IndexSet set = build_index_set(d, q);
  const auto L = static_cast<Eigen::Index>(set.size());
  return build_rule_from_nodes<Scalar>(std::move(set), rule_nodes<Scalar>(d, alpha * L), alpha);
}

/// Process-wide cache: rules are built once per (scalar, d, q, alpha).
template <typename Scalar = double>
class RuleCache {
 public:
  static RuleCache& instance() {
    static RuleCache cache;
    return cache;
  }

  std::shared_ptr<const QuadratureRule<Scalar>> get(int d, int q, int alpha) {
    const auto key = std::make_tuple(d, q, alpha);
    {
      std::lock_guard lock(mutex_);
      if (auto it = rules_.find(key); it != rules_.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule<Scalar>>(build_rule<Scalar>(d, q, alpha));
    std::lock_guard lock(mutex_);
    return rules_.emplace(key, std::move(rule)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, std::shared_ptr<const QuadratureRule<Scalar>>> rules_;
};

/// Maps reference nodes into `box`: x = center + half_lengths .* ref.
template <typename Scalar>
MatrixX<Scalar> map_nodes(const QuadratureRule<Scalar>& rule, const Box<Scalar>& box) {
  const VectorX<Scalar> half = box.lengths() / Scalar(2);
  MatrixX<Scalar> x = half.asDiagonal() * rule.points;
  x.colwise() += box.center();
  return x;
}

/// Applies `rule` to a batch integrand on `box`. `f` takes a d x M matrix of
/// points (one per column) and returns the M values.
template <typename Scalar, typename F>
QuadratureResult<Scalar> apply_rule(const QuadratureRule<Scalar>& rule, F&& f,
                                    const Box<Scalar>& box) {
  if (!box.valid() || box.dim() != rule.dim)
    throw ConfigError("apply_rule: degenerate box or dimension mismatch");
  const MatrixX<Scalar> x = map_nodes(rule, box);
  const VectorX<Scalar> values = f(x);
  if (values.size() != x.cols()) throw EvaluationError("apply_rule: integrand returned wrong size");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(static_cast<double>(values[i]))) {
      std::ostringstream msg;
      msg << "integrand is not finite (" << values[i] << ") at point (";
      for (Eigen::Index k = 0; k < x.rows(); ++k) msg << (k ? ", " : "") << x(k, i);
      msg << ")";
      throw EvaluationError(msg.str());
    }
  }
  const VectorX<Scalar> est = rule.stacked * values;
  QuadratureResult<Scalar> res;
  res.cell_scale = box.volume() / std::ldexp(Scalar(1), rule.dim);
  res.integral_estimate = res.cell_scale * est[0];
  res.leading_coeffs = est.tail(rule.dim + 1);
  res.eval_count = rule.size();
  return res;
}

/// Wraps a per-point callable `g(const VectorX&) -> Scalar` as a batch integrand.
template <typename Scalar, typename G>
auto pointwise(G g) {
  return [g = std::move(g)](const MatrixX<Scalar>& x) {
    VectorX<Scalar> v(x.cols());
    VectorX<Scalar> p(x.rows());
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      p = x.col(i);
      v[i] = g(p);
    }
    return v;
  };
}

}  // namespace tcub
