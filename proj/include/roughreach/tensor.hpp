#pragma once

// Arithmetic in the truncated tensor algebra T^(N)(R^n) and the free
// nilpotent group G^(N)(R^n): truncated product, exp, log, shuffle-relation
// membership test and the Dynkin projection onto the free Lie subspace.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughreach {

inline constexpr int kMaxDepth = 6;

inline std::size_t pow_size(int n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

/// Dense element of T^(N)(R^n). Level k stores n^k coefficients in
/// lexicographic word order: word (i_1,...,i_k) with letters in 0..n-1 sits
/// at index sum_j i_j * n^(k-j).
struct TruncatedTensor {
  int width = 0;
  int depth = 0;
  std::vector<std::vector<double>> levels;

  TruncatedTensor() = default;
  TruncatedTensor(int n, int N) : width(n), depth(N) {
    if (n < 1) throw std::invalid_argument("tensor width must be positive");
    if (N < 1 || N > kMaxDepth)
      throw std::invalid_argument("tensor depth must be in 1.." +
                                  std::to_string(kMaxDepth));
    levels.resize(N + 1);
    for (int k = 0; k <= N; ++k) levels[k].assign(pow_size(n, k), 0.0);
  }

  double& scalar() { return levels[0][0]; }
  double scalar() const { return levels[0][0]; }

  bool finite() const {
    for (const auto& lv : levels)
      for (double c : lv)
        if (!std::isfinite(c)) return false;
    return true;
  }
};

inline TruncatedTensor tensor_zero(int n, int N) { return {n, N}; }

inline TruncatedTensor tensor_identity(int n, int N) {
  TruncatedTensor t(n, N);
  t.scalar() = 1.0;
  return t;
}

inline void check_compatible(const TruncatedTensor& a,
                             const TruncatedTensor& b) {
  if (a.width != b.width || a.depth != b.depth)
    throw std::invalid_argument("tensor width/depth mismatch");
}

inline TruncatedTensor operator+(const TruncatedTensor& a,
                                 const TruncatedTensor& b) {
  check_compatible(a, b);
  TruncatedTensor r = a;
  for (int k = 0; k <= r.depth; ++k)
    for (std::size_t i = 0; i < r.levels[k].size(); ++i)
      r.levels[k][i] += b.levels[k][i];
  return r;
}

inline TruncatedTensor operator-(const TruncatedTensor& a,
                                 const TruncatedTensor& b) {
  check_compatible(a, b);
  TruncatedTensor r = a;
  for (int k = 0; k <= r.depth; ++k)
    for (std::size_t i = 0; i < r.levels[k].size(); ++i)
      r.levels[k][i] -= b.levels[k][i];
  return r;
}

inline TruncatedTensor operator*(double c, const TruncatedTensor& a) {
  TruncatedTensor r = a;
  for (auto& lv : r.levels)
    for (double& x : lv) x *= c;
  return r;
}

/// Truncated tensor product: level k of the result is
/// sum_{j=0..k} a_j (x) b_{k-j}; terms beyond level N are dropped.
inline TruncatedTensor tensor_mul(const TruncatedTensor& a,
                                  const TruncatedTensor& b) {
  check_compatible(a, b);
  const int n = a.width, N = a.depth;
  TruncatedTensor r(n, N);
  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j <= k; ++j) {
      const auto& la = a.levels[j];
      const auto& lb = b.levels[k - j];
      const std::size_t nb = lb.size();
      auto& lr = r.levels[k];
      for (std::size_t ia = 0; ia < la.size(); ++ia) {
        const double ca = la[ia];
        if (ca == 0.0) continue;
        const std::size_t base = ia * nb;
        for (std::size_t ib = 0; ib < nb; ++ib) lr[base + ib] += ca * lb[ib];
      }
    }
  }
  return r;
}

/// Group exponential; the series terminates at level N by nilpotency.
inline TruncatedTensor tensor_exp(const TruncatedTensor& x) {
  if (x.scalar() != 0.0)
    throw std::domain_error("tensor_exp requires zero level-0 coefficient");
  TruncatedTensor r = tensor_identity(x.width, x.depth);
  TruncatedTensor term = x;
  for (int k = 1; k <= x.depth; ++k) {
    r = r + term;
    term = (1.0 / (k + 1)) * tensor_mul(term, x);
  }
  return r;
}

/// Truncated logarithm: sum_{k=1..N} (-1)^(k+1) (g-1)^k / k.
inline TruncatedTensor tensor_log(const TruncatedTensor& g) {
  if (g.scalar() != 1.0)
    throw std::domain_error("tensor_log requires unit level-0 coefficient");
  TruncatedTensor y = g;
  y.scalar() = 0.0;
  TruncatedTensor r = tensor_zero(g.width, g.depth);
  TruncatedTensor power = y;
  double sign = 1.0;
  for (int k = 1; k <= g.depth; ++k) {
    r = r + (sign / k) * power;
    power = tensor_mul(power, y);
    sign = -sign;
  }
  return r;
}

/// Group inverse of g in G^(N): exp(-log g).
inline TruncatedTensor tensor_inverse(const TruncatedTensor& g) {
  return tensor_exp(-1.0 * tensor_log(g));
}

inline TruncatedTensor operator-(const TruncatedTensor& a) { return -1.0 * a; }

inline double max_abs(const TruncatedTensor& a) {
  double m = 0.0;
  for (const auto& lv : a.levels)
    for (double c : lv) m = std::max(m, std::abs(c));
  return m;
}

namespace detail {

// Accumulates <g, u shuffle v> by walking all interleavings of u and v.
inline double shuffle_pairing(const TruncatedTensor& g,
                              const std::vector<int>& u,
                              const std::vector<int>& v, std::size_t up,
                              std::size_t vp, std::size_t word_idx) {
  const std::size_t n = static_cast<std::size_t>(g.width);
  if (up == u.size() && vp == v.size())
    return g.levels[u.size() + v.size()][word_idx];
  double s = 0.0;
  if (up < u.size())
    s += shuffle_pairing(g, u, v, up + 1, vp, word_idx * n + u[up]);
  if (vp < v.size())
    s += shuffle_pairing(g, u, v, up, vp + 1, word_idx * n + v[vp]);
  return s;
}

inline std::vector<int> word_of_index(int n, int len, std::size_t idx) {
  std::vector<int> w(len);
  for (int j = len - 1; j >= 0; --j) {
    w[j] = static_cast<int>(idx % n);
    idx /= n;
  }
  return w;
}

}  // namespace detail

struct ShuffleReport {
  bool pass = true;
  double worst_violation = 0.0;
};

/// Group-likeness test: <g,u><g,v> == <g, u shuffle v> for every word pair
/// with |u| + |v| <= N.
inline ShuffleReport shuffle_check(const TruncatedTensor& g,
                                   double tol = 1e-10) {
  if (g.scalar() != 1.0)
    throw std::domain_error("shuffle_check requires unit level-0 coefficient");
  const int n = g.width, N = g.depth;
  ShuffleReport rep;
  for (int lu = 1; lu < N; ++lu) {
    for (int lv = 1; lu + lv <= N; ++lv) {
      const std::size_t nu = pow_size(n, lu), nv = pow_size(n, lv);
      for (std::size_t iu = 0; iu < nu; ++iu) {
        const auto u = detail::word_of_index(n, lu, iu);
        for (std::size_t iv = 0; iv < nv; ++iv) {
          const auto v = detail::word_of_index(n, lv, iv);
          const double lhs = g.levels[lu][iu] * g.levels[lv][iv];
          const double rhs = detail::shuffle_pairing(g, u, v, 0, 0, 0);
          rep.worst_violation =
              std::max(rep.worst_violation, std::abs(lhs - rhs));
        }
      }
    }
  }
  rep.pass = rep.worst_violation <= tol;
  return rep;
}

namespace detail {

// Right-nested bracket of a word: rho(i) = e_i,
// rho(i w) = e_i (x) rho(w) - rho(w) (x) e_i, as a level-|w| coefficient array.
inline std::vector<double> right_bracket(int n, const std::vector<int>& w) {
  std::vector<double> cur(static_cast<std::size_t>(n), 0.0);
  cur[w.back()] = 1.0;
  for (int pos = static_cast<int>(w.size()) - 2; pos >= 0; --pos) {
    const std::size_t letter = static_cast<std::size_t>(w[pos]);
    const std::size_t len = cur.size();
    std::vector<double> next(len * n, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      if (cur[i] == 0.0) continue;
      next[letter * len + i] += cur[i];
      next[i * n + letter] -= cur[i];
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace detail

/// Dynkin projection: level k maps word w to right_bracket(w)/k. Fixes the
/// free Lie subspace pointwise, so ||project(x) - x|| measures the distance
/// of x from being a Lie polynomial.
inline TruncatedTensor dynkin_project(const TruncatedTensor& x) {
  const int n = x.width, N = x.depth;
  TruncatedTensor r(n, N);
  for (int k = 1; k <= N; ++k) {
    const std::size_t nk = pow_size(n, k);
    for (std::size_t idx = 0; idx < nk; ++idx) {
      const double c = x.levels[k][idx];
      if (c == 0.0) continue;
      const auto w = detail::word_of_index(n, k, idx);
      const auto rho = detail::right_bracket(n, w);
      for (std::size_t j = 0; j < nk; ++j)
        r.levels[k][j] += c * rho[j] / k;
    }
  }
  return r;
}

inline double lie_residual(const TruncatedTensor& x) {
  double m = std::abs(x.scalar());
  return std::max(m, max_abs(dynkin_project(x) - x));
}

/// Lie-algebra element of L^(N)(R^n), stored as a tensor with zero scalar
/// part. For N = 2 exposes the drift/area view (lambda, mu).
struct LieElement {
  TruncatedTensor value;

  explicit LieElement(TruncatedTensor t, double tol = 1e-10)
      : value(std::move(t)) {
    if (value.scalar() != 0.0)
      throw std::domain_error("LieElement requires zero level-0 coefficient");
    if (lie_residual(value) > tol)
      throw std::domain_error("coefficients do not lie in the free Lie space");
  }

  std::vector<double> drift() const { return value.levels[1]; }

  // Antisymmetric area matrix; only meaningful for depth >= 2.
  std::vector<std::vector<double>> area() const {
    const int n = value.width;
    std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0.0));
    if (value.depth < 2) return mu;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mu[i][j] = value.levels[2][i * n + j];
    return mu;
  }
};

/// Builds the N=2 Lie element with drift lambda and antisymmetric area mu.
inline TruncatedTensor lie_from_drift_area(
    const std::vector<double>& lambda,
    const std::vector<std::vector<double>>& mu) {
  const int n = static_cast<int>(lambda.size());
  TruncatedTensor t(n, 2);
  for (int i = 0; i < n; ++i) t.levels[1][i] = lambda[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (std::abs(mu[i][j] + mu[j][i]) != 0.0)
        throw std::invalid_argument("area matrix must be antisymmetric");
      t.levels[2][i * n + j] = mu[i][j];
    }
  return t;
}

}  // namespace roughreach
