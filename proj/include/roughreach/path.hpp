#pragma once

// Piecewise-linear paths in R^n: the controls and driving paths of the
// accessibility problem.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace roughreach {

struct PiecewiseLinearPath {
  int dim = 0;
  std::vector<double> times;                 // strictly increasing
  std::vector<std::vector<double>> points;   // one per breakpoint

  PiecewiseLinearPath() = default;
  PiecewiseLinearPath(int n, std::vector<double> t,
                      std::vector<std::vector<double>> p)
      : dim(n), times(std::move(t)), points(std::move(p)) {
    validate();
  }

  void validate() const {
    if (dim < 1) throw std::invalid_argument("path dimension must be positive");
    if (times.empty() || times.size() != points.size())
      throw std::invalid_argument("path needs matching times and points");
    for (std::size_t k = 1; k < times.size(); ++k)
      if (!(times[k] > times[k - 1]))
        throw std::invalid_argument("path times must be strictly increasing");
    for (const auto& p : points) {
      if (static_cast<int>(p.size()) != dim)
        throw std::invalid_argument("path point dimension mismatch");
      for (double c : p)
        if (!std::isfinite(c))
          throw std::invalid_argument("path coordinates must be finite");
    }
  }

  std::size_t segment_count() const { return times.size() - 1; }

  std::vector<double> increment(std::size_t seg) const {
    std::vector<double> d(dim);
    for (int i = 0; i < dim; ++i)
      d[i] = points[seg + 1][i] - points[seg][i];
    return d;
  }

  double length() const {
    double total = 0.0;
    for (std::size_t s = 0; s < segment_count(); ++s) {
      double acc = 0.0;
      for (double c : increment(s)) acc += c * c;
      total += std::sqrt(acc);
    }
    return total;
  }
};

inline PiecewiseLinearPath reverse(const PiecewiseLinearPath& path) {
  PiecewiseLinearPath r = path;
  const double t0 = path.times.front(), t1 = path.times.back();
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    r.times[k] = t0 + (t1 - path.times[path.times.size() - 1 - k]);
    r.points[k] = path.points[path.points.size() - 1 - k];
  }
  return r;
}

/// Affinely maps the time interval onto [0, T]; the path image is unchanged.
inline PiecewiseLinearPath reparametrize(const PiecewiseLinearPath& path,
                                         double horizon) {
  if (!(horizon > 0.0))
    throw std::domain_error("reparametrize horizon must be positive");
  PiecewiseLinearPath r = path;
  const double t0 = path.times.front();
  const double span = path.times.back() - t0;
  if (span == 0.0) {
    r.times[0] = 0.0;
    return r;
  }
  for (auto& t : r.times) t = (t - t0) / span * horizon;
  return r;
}

/// Joins b after a, shifting b's clock to start at a's last time.
inline PiecewiseLinearPath concat(const PiecewiseLinearPath& a,
                                  const PiecewiseLinearPath& b) {
  if (a.dim != b.dim) throw std::invalid_argument("path dimension mismatch");
  PiecewiseLinearPath r = a;
  const double shift = a.times.back() - b.times.front();
  std::vector<double> offset(a.dim);
  for (int i = 0; i < a.dim; ++i)
    offset[i] = a.points.back()[i] - b.points.front()[i];
  for (std::size_t k = 1; k < b.times.size(); ++k) {
    r.times.push_back(b.times[k] + shift);
    auto p = b.points[k];
    for (int i = 0; i < a.dim; ++i) p[i] += offset[i];
    r.points.push_back(std::move(p));
  }
  return r;
}

/// Polygonal sampling of the oscillating family
/// x(n): t -> (cos(2 pi n^2 t)/n, sin(2 pi n^2 t)/n) on [0, 1].
inline PiecewiseLinearPath sample_oscillating(int n, int segments) {
  if (n < 1 || segments < 1)
    throw std::invalid_argument("oscillating sampler needs n, segments >= 1");
  const double freq = 2.0 * M_PI * n * n;
  PiecewiseLinearPath p;
  p.dim = 2;
  p.times.reserve(segments + 1);
  p.points.reserve(segments + 1);
  for (int k = 0; k <= segments; ++k) {
    const double t = static_cast<double>(k) / segments;
    p.times.push_back(t);
    p.points.push_back({std::cos(freq * t) / n, std::sin(freq * t) / n});
  }
  return p;
}

}  // namespace roughreach
