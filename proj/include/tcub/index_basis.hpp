#pragma once

// Tchebychef polynomials and the hyperbolic-cross index sets
//
//   W(d, q) = { m in N^d : prod_i max(1, m_i) <= q }
//
// that define the reduced tensor-product basis used by the quadrature rules.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tcub/errors.hpp"

namespace tcub {

using MultiIndex = std::vector<int>;

/// True when prod_i max(1, m_i) <= q.
inline bool in_hyperbolic_cross(std::span<const int> m, int q) {
  long long prod = 1;
  for (int mi : m) {
    if (mi < 0) return false;
    prod *= std::max(1, mi);
    if (prod > q) return false;
  }
  return true;
}

class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(int dim, int level, std::vector<MultiIndex> members)
      : dim_(dim), level_(level), members_(std::move(members)) {}

  int dim() const { return dim_; }
  int level() const { return level_; }
  std::size_t size() const { return members_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<MultiIndex>& members() const { return members_; }

  std::optional<std::size_t> find(const MultiIndex& m) const {
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (members_[i] == m) return i;
    return std::nullopt;
  }

  /// Positions of the d+1 leading indices: the zero index, then e_1 .. e_d.
  std::vector<std::size_t> leading_positions() const {
    std::vector<std::size_t> pos;
    pos.reserve(dim_ + 1);
    MultiIndex m(dim_, 0);
    pos.push_back(*find(m));
    for (int k = 0; k < dim_; ++k) {
      m.assign(dim_, 0);
      m[k] = 1;
      pos.push_back(*find(m));
    }
    return pos;
  }

 private:
  int dim_ = 0;
  int level_ = 0;
  std::vector<MultiIndex> members_;
};

namespace detail {

inline void enumerate_cross(int k, long long prod, int q, MultiIndex& cur,
                            std::vector<MultiIndex>& out) {
  if (k == static_cast<int>(cur.size())) {
    out.push_back(cur);
    return;
  }
  for (int m = 0; prod * std::max(1, m) <= q; ++m) {
    cur[k] = m;
    enumerate_cross(k + 1, prod * std::max(1, m), q, cur, out);
  }
  cur[k] = 0;
}

}  // namespace detail

/// Members are ordered by total degree, then lexicographically.
inline IndexSet build_index_set(int d, int q) {
  if (d <= 0) throw ConfigError("build_index_set: dimension must be >= 1, got " + std::to_string(d));
  if (q <= 0) throw ConfigError("build_index_set: level must be >= 1, got " + std::to_string(q));
  std::vector<MultiIndex> members;
  MultiIndex cur(d, 0);
  detail::enumerate_cross(0, 1, q, cur, members);
  std::sort(members.begin(), members.end(), [](const MultiIndex& a, const MultiIndex& b) {
    int sa = 0, sb = 0;
    for (int v : a) sa += v;
    for (int v : b) sb += v;
    if (sa != sb) return sa < sb;
    return a < b;
  });
  return IndexSet(d, q, std::move(members));
}

/// T_m(x) by the three-term recurrence.
template <typename Scalar>
Scalar tcheb_eval(int m, Scalar x) {
  assert(m >= 0);
  assert(std::abs(x) <= Scalar(1) + Scalar(64) * std::numeric_limits<Scalar>::epsilon());
  if (m == 0) return Scalar(1);
  Scalar prev = Scalar(1), cur = x;
  for (int k = 1; k < m; ++k) {
    Scalar next = Scalar(2) * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Writes T_0(x) .. T_n(x) into out[0..n].
template <typename Scalar>
void tcheb_table(Scalar x, int n, Scalar* out) {
  out[0] = Scalar(1);
  if (n >= 1) out[1] = x;
  for (int k = 1; k < n; ++k) out[k + 1] = Scalar(2) * x * out[k] - out[k - 1];
}

/// Integral of T_m over [-1, 1].
template <typename Scalar>
Scalar tcheb_integral_1d(int m) {
  if (m % 2 != 0) return Scalar(0);
  return Scalar(2) / (Scalar(1) - Scalar(m) * Scalar(m));
}

/// Integral of the tensor-product basis function T_m over [-1, 1]^d.
template <typename Scalar>
Scalar basis_integral(const MultiIndex& m) {
  Scalar v(1);
  for (int mi : m) {
    if (mi % 2 != 0) return Scalar(0);
    v *= tcheb_integral_1d<Scalar>(mi);
  }
  return v;
}

}  // namespace tcub
