#pragma once

// Truncated signatures of piecewise-linear paths via Chen's identity:
// the signature is the ordered tensor product of segment exponentials.

#include "roughreach/path.hpp"
#include "roughreach/tensor.hpp"

#include <optional>
#include <stdexcept>

namespace roughreach {

struct SignatureResult {
  TruncatedTensor group;   // shuffle-passing element of G^(N)(R^n)
  double t0 = 0.0;
  double t1 = 0.0;
};

/// exp of a pure level-1 increment in closed form: level k is v^(x)k / k!.
inline TruncatedTensor segment_exp(const std::vector<double>& v, int depth) {
  const int n = static_cast<int>(v.size());
  TruncatedTensor r = tensor_identity(n, depth);
  std::vector<double> power = v;  // v^(x)k / k!
  for (int k = 1; k <= depth; ++k) {
    r.levels[k] = power;
    if (k == depth) break;
    std::vector<double> next(power.size() * n, 0.0);
    for (std::size_t i = 0; i < power.size(); ++i)
      for (int j = 0; j < n; ++j)
        next[i * n + j] = power[i] * v[j] / (k + 1);
    power = std::move(next);
  }
  return r;
}

/// Order-N truncated signature of a piecewise-linear path.
inline SignatureResult sig_pl(const PiecewiseLinearPath& path, int depth) {
  if (depth < 1) throw std::invalid_argument("signature depth must be >= 1");
  path.validate();
  TruncatedTensor g = tensor_identity(path.dim, depth);
  for (std::size_t s = 0; s < path.segment_count(); ++s)
    g = tensor_mul(g, segment_exp(path.increment(s), depth));
  return {std::move(g), path.times.front(), path.times.back()};
}

/// Chen concatenation. Interval adjacency is checked when both operands
/// carry nontrivial intervals.
inline SignatureResult chen_concat(const SignatureResult& a,
                                   const SignatureResult& b,
                                   double time_tol = 1e-9) {
  check_compatible(a.group, b.group);
  if (a.t1 != a.t0 && b.t1 != b.t0 && std::abs(a.t1 - b.t0) > time_tol)
    throw std::invalid_argument("signature intervals are not adjacent");
  return {tensor_mul(a.group, b.group), a.t0, b.t1};
}

}  // namespace roughreach
