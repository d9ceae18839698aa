#pragma once

// Level-2 geometric rough paths given as partitions with log-signature
// increments: a drift vector and an antisymmetric area matrix per
// subinterval. The symmetric level-2 part is forced by geometricity.

#include "roughreach/path.hpp"
#include "roughreach/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace roughreach {

struct LogIncrement {
  std::vector<double> lambda;               // drift in R^n
  std::vector<std::vector<double>> mu;      // antisymmetric n x n area
};

struct RoughPathL2 {
  int dim = 0;
  std::vector<double> times;
  std::vector<LogIncrement> increments;     // one per subinterval
  std::vector<double> start;                // x_0

  void validate() const {
    if (dim < 1) throw std::invalid_argument("rough path dimension must be >= 1");
    if (times.size() < 2 || increments.size() != times.size() - 1)
      throw std::invalid_argument("rough path needs K+1 times and K increments");
    for (std::size_t k = 1; k < times.size(); ++k)
      if (!(times[k] > times[k - 1]))
        throw std::invalid_argument("rough path times must be strictly increasing");
    if (static_cast<int>(start.size()) != dim)
      throw std::invalid_argument("rough path start dimension mismatch");
    for (const auto& inc : increments) {
      if (static_cast<int>(inc.lambda.size()) != dim ||
          static_cast<int>(inc.mu.size()) != dim)
        throw std::invalid_argument("rough path increment dimension mismatch");
      for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(inc.mu[i].size()) != dim)
          throw std::invalid_argument("rough path increment dimension mismatch");
        for (int j = 0; j < dim; ++j)
          if (inc.mu[i][j] + inc.mu[j][i] != 0.0)
            throw std::invalid_argument("area matrix must be exactly antisymmetric");
      }
      for (double c : inc.lambda)
        if (!std::isfinite(c))
          throw std::invalid_argument("rough path increment must be finite");
    }
  }

  /// Total level-2 signature over the whole interval, by Chen on the
  /// per-interval exponentials exp(lambda + mu).
  TruncatedTensor total_signature() const {
    TruncatedTensor g = tensor_identity(dim, 2);
    for (const auto& inc : increments)
      g = tensor_mul(g, tensor_exp(lie_from_drift_area(inc.lambda, inc.mu)));
    return g;
  }
};

/// Canonical lift of a piecewise-linear path: per segment the drift is the
/// increment and the area vanishes.
inline RoughPathL2 pl_lift(const PiecewiseLinearPath& path) {
  path.validate();
  RoughPathL2 x;
  x.dim = path.dim;
  x.start = path.points.front();
  if (path.times.size() == 1) {
    // degenerate single-point path: one empty interval
    x.times = {path.times[0], path.times[0] + 1.0};
    x.increments.push_back(
        {std::vector<double>(path.dim, 0.0),
         std::vector<std::vector<double>>(path.dim,
                                          std::vector<double>(path.dim, 0.0))});
    return x;
  }
  x.times = path.times;
  for (std::size_t s = 0; s < path.segment_count(); ++s)
    x.increments.push_back(
        {path.increment(s),
         std::vector<std::vector<double>>(path.dim,
                                          std::vector<double>(path.dim, 0.0))});
  return x;
}

/// The pure-area rough path: zero drift, constant-rate area A in the
/// coordinate plane (i, j), split over K equal subintervals of [0, 1].
/// Plane indices are 1-based.
inline RoughPathL2 pure_area(int n, int i, int j, double area, int intervals) {
  if (i == j) throw std::domain_error("pure_area plane needs distinct axes");
  if (i < 1 || j < 1 || i > n || j > n)
    throw std::invalid_argument("pure_area plane axis out of range");
  if (intervals < 1) throw std::invalid_argument("pure_area needs K >= 1");
  if (i > j) {
    std::swap(i, j);
    area = -area;
  }
  RoughPathL2 x;
  x.dim = n;
  x.start.assign(n, 0.0);
  for (int k = 0; k <= intervals; ++k)
    x.times.push_back(static_cast<double>(k) / intervals);
  LogIncrement inc;
  inc.lambda.assign(n, 0.0);
  inc.mu.assign(n, std::vector<double>(n, 0.0));
  inc.mu[i - 1][j - 1] = area / intervals;
  inc.mu[j - 1][i - 1] = -area / intervals;
  x.increments.assign(intervals, inc);
  return x;
}

}  // namespace roughreach
