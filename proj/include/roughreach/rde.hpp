#pragma once

// Solvers for the controlled systems: the classical ODE dy = f(y) dx driven
// by a piecewise-linear path, and the level-2 RDE via the log-ODE scheme,
// which integrates on each partition interval the autonomous ODE
//   dy/ds = sum_i lambda_i f^i(y) + sum_{i<j} mu_ij [f^i, f^j](y),
// with brackets supplied symbolically.

#include "roughreach/flow.hpp"
#include "roughreach/rough_path.hpp"
#include "roughreach/vector_field.hpp"

#include <string>
#include <vector>

namespace roughreach {

struct RDESolution {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::string scheme;
  int substeps = 0;

  const std::vector<double>& terminal() const { return states.back(); }
};

inline constexpr int kDefaultSubsteps = 64;

/// Classical controlled ODE: on each segment flow along the frozen
/// direction combination given by the segment increment.
inline RDESolution solve_ode(const VectorFieldFamily& family,
                             const PiecewiseLinearPath& path,
                             std::vector<double> start,
                             int substeps = kDefaultSubsteps) {
  family.validate();
  path.validate();
  if (path.dim != family.inputs)
    throw std::invalid_argument("path dimension must match field count");
  if (static_cast<int>(start.size()) != family.dim)
    throw std::invalid_argument("start dimension mismatch");
  RDESolution sol;
  sol.scheme = "segment-rk4";
  sol.substeps = substeps;
  sol.times.push_back(path.times.front());
  sol.states.push_back(start);
  for (std::size_t s = 0; s < path.segment_count(); ++s) {
    start = flow_direction(family, path.increment(s), std::move(start), substeps);
    sol.times.push_back(path.times[s + 1]);
    sol.states.push_back(start);
  }
  return sol;
}

/// Log-ODE scheme for a level-2 rough driver.
inline RDESolution solve_rde(const VectorFieldFamily& family,
                             const RoughPathL2& driver,
                             std::vector<double> start,
                             int substeps = kDefaultSubsteps) {
  family.validate();
  driver.validate();
  if (driver.dim != family.inputs)
    throw std::invalid_argument("rough path dimension must match field count");
  if (static_cast<int>(start.size()) != family.dim)
    throw std::invalid_argument("start dimension mismatch");

  const int n = family.inputs, d = family.dim;
  std::vector<std::vector<VectorField>> brackets(n);
  for (int i = 0; i < n; ++i) {
    brackets[i].resize(n);
    for (int j = i + 1; j < n; ++j)
      brackets[i][j] = lie_bracket(family, i, j);
  }

  RDESolution sol;
  sol.scheme = "log-ode-l2";
  sol.substeps = substeps;
  sol.times.push_back(driver.times.front());
  sol.states.push_back(start);
  for (std::size_t k = 0; k < driver.increments.size(); ++k) {
    const auto& inc = driver.increments[k];
    start = detail::rk4(
        [&](const std::vector<double>& y) {
          std::vector<double> v(d, 0.0);
          for (int i = 0; i < n; ++i) {
            if (inc.lambda[i] == 0.0) continue;
            for (int c = 0; c < d; ++c)
              v[c] += inc.lambda[i] * eval(family.fields[i][c], y);
          }
          for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
              if (inc.mu[i][j] == 0.0) continue;
              for (int c = 0; c < d; ++c)
                v[c] += inc.mu[i][j] * eval(brackets[i][j][c], y);
            }
          return v;
        },
        std::move(start), 1.0, substeps);
    sol.times.push_back(driver.times[k + 1]);
    sol.states.push_back(start);
  }
  return sol;
}

/// Splits every partition interval of a rough path into `factor` equal
/// pieces with proportional lambda and mu. Used for mesh-refinement checks.
inline RoughPathL2 refine(const RoughPathL2& x, int factor) {
  if (factor < 1) throw std::invalid_argument("refine factor must be >= 1");
  RoughPathL2 r;
  r.dim = x.dim;
  r.start = x.start;
  r.times.push_back(x.times.front());
  for (std::size_t k = 0; k < x.increments.size(); ++k) {
    LogIncrement piece = x.increments[k];
    for (auto& c : piece.lambda) c /= factor;
    for (auto& row : piece.mu)
      for (auto& c : row) c /= factor;
    const double t0 = x.times[k], t1 = x.times[k + 1];
    for (int s = 1; s <= factor; ++s) {
      r.times.push_back(t0 + (t1 - t0) * s / factor);
      r.increments.push_back(piece);
    }
  }
  return r;
}

}  // namespace roughreach
