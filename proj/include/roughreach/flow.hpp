#pragma once

// Integral curves and flows of vector fields, finite compositions of flows
// (D-diffeomorphisms) and their differentials via the variational equation.

#include "roughreach/vector_field.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace roughreach {

inline constexpr double kBlowUpGuard = 1e8;

struct BlowUpError : std::runtime_error {
  double last_valid_time;
  explicit BlowUpError(double t)
      : std::runtime_error("flow blow-up; last valid time " +
                           std::to_string(t)),
        last_valid_time(t) {}
};

struct IntegratorSettings {
  double step = 0.0;  // 0 means the default |t|/max(64, ceil(|t|/0.01))
};

inline int default_step_count(double t) {
  const double at = std::abs(t);
  return std::max(64, static_cast<int>(std::ceil(at / 0.01)));
}

namespace detail {

inline double sup_norm(const std::vector<double>& y) {
  double m = 0.0;
  for (double c : y) m = std::max(m, std::abs(c));
  return m;
}

// Classical RK4 with a fixed number of steps on [0, t]; deriv maps state to
// state derivative. Aborts when the state leaves the blow-up guard box.
inline std::vector<double> rk4(
    const std::function<std::vector<double>(const std::vector<double>&)>& deriv,
    std::vector<double> y, double t, int steps) {
  if (t == 0.0 || steps <= 0) return y;
  const double h = t / steps;
  const std::size_t d = y.size();
  std::vector<double> k1, k2, k3, k4, tmp(d);
  for (int s = 0; s < steps; ++s) {
    k1 = deriv(y);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    k2 = deriv(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    k3 = deriv(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
    k4 = deriv(tmp);
    for (std::size_t i = 0; i < d; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (sup_norm(y) > kBlowUpGuard || !std::isfinite(y[0]))
      throw BlowUpError(s * h);
  }
  return y;
}

}  // namespace detail

/// Flow of a single field for time t (signed). Fixed-step RK4.
inline std::vector<double> flow(const VectorFieldFamily& family, int index,
                                double t, std::vector<double> start,
                                IntegratorSettings settings = {}) {
  family.validate();
  if (index < 0 || index >= family.inputs)
    throw std::invalid_argument("flow field index out of range");
  const int steps = settings.step > 0.0
                        ? std::max(1, static_cast<int>(std::ceil(std::abs(t) / settings.step)))
                        : default_step_count(t);
  const auto& f = family.fields[index];
  return detail::rk4(
      [&](const std::vector<double>& y) { return eval_field(f, y); },
      std::move(start), t, steps);
}

/// Flow along the frozen direction combination sum_i u_i f^i for unit time.
inline std::vector<double> flow_direction(const VectorFieldFamily& family,
                                          const std::vector<double>& u,
                                          std::vector<double> start,
                                          int steps = 64) {
  family.validate();
  if (static_cast<int>(u.size()) != family.inputs)
    throw std::invalid_argument("direction dimension mismatch");
  return detail::rk4(
      [&](const std::vector<double>& y) {
        std::vector<double> v(family.dim, 0.0);
        for (int i = 0; i < family.inputs; ++i) {
          if (u[i] == 0.0) continue;
          for (int c = 0; c < family.dim; ++c)
            v[c] += u[i] * eval(family.fields[i][c], y);
        }
        return v;
      },
      std::move(start), 1.0, steps);
}

/// Ordered list of (field index, flow time) pairs; the composition runs
/// first stage first.
struct DDiffeo {
  std::vector<std::pair<int, double>> stages;
};

inline DDiffeo inverse_ddiffeo(const DDiffeo& g) {
  DDiffeo inv;
  inv.stages.reserve(g.stages.size());
  for (auto it = g.stages.rbegin(); it != g.stages.rend(); ++it)
    inv.stages.push_back({it->first, -it->second});
  return inv;
}

inline std::vector<double> apply_ddiffeo(const VectorFieldFamily& family,
                                         const DDiffeo& g,
                                         std::vector<double> y,
                                         IntegratorSettings settings = {}) {
  for (std::size_t s = 0; s < g.stages.size(); ++s) {
    try {
      y = flow(family, g.stages[s].first, g.stages[s].second, std::move(y),
               settings);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.last_valid_time);  // stage index in what(): rethrow
    }
  }
  return y;
}

/// Differential D(xi)(y) of the composed flow, by integrating the
/// variational equation dJ/ds = Df(gamma(s)).J jointly with the flow.
/// Returns the d x d matrix in row-major order.
inline std::vector<std::vector<double>> pushforward(
    const VectorFieldFamily& family, const DDiffeo& g, std::vector<double> y,
    IntegratorSettings settings = {}) {
  family.validate();
  const int d = family.dim;
  std::vector<std::vector<double>> jac(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) jac[i][i] = 1.0;

  for (const auto& [index, t] : g.stages) {
    if (index < 0 || index >= family.inputs)
      throw std::invalid_argument("pushforward field index out of range");
    const auto& f = family.fields[index];
    const auto df = field_jacobian(f, d);

    // joint state: [y (d), J (d*d) row-major], J the stage differential
    std::vector<double> state(d + d * d, 0.0);
    for (int i = 0; i < d; ++i) state[i] = y[i];
    for (int i = 0; i < d; ++i) state[d + i * d + i] = 1.0;

    const int steps = settings.step > 0.0
                          ? std::max(1, static_cast<int>(std::ceil(std::abs(t) / settings.step)))
                          : default_step_count(t);
    state = detail::rk4(
        [&](const std::vector<double>& s) {
          std::vector<double> pt(s.begin(), s.begin() + d);
          std::vector<double> ds(d + d * d, 0.0);
          for (int c = 0; c < d; ++c) ds[c] = eval(f[c], pt);
          std::vector<double> a(d * d);
          for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) a[r * d + c] = eval(df[r][c], pt);
          for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
              double acc = 0.0;
              for (int k = 0; k < d; ++k)
                acc += a[r * d + k] * s[d + k * d + c];
              ds[d + r * d + c] = acc;
            }
          return ds;
        },
        std::move(state), t, steps);

    for (int i = 0; i < d; ++i) y[i] = state[i];
    // chain rule: stage differential times accumulated differential
    std::vector<std::vector<double>> next(d, std::vector<double>(d, 0.0));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k)
          acc += state[d + r * d + k] * jac[k][c];
        next[r][c] = acc;
      }
    jac = std::move(next);
  }
  return jac;
}

}  // namespace roughreach
