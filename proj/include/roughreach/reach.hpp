#pragma once

// The accessibility solver: produce a piecewise-linear control whose ODE
// terminal state matches the rough-path terminal state. Exact constructive
// inversion in the step-2 signature group; shooting optimization
// (Levenberg-Marquardt with multi-start) for general families.

#include "roughreach/orbit.hpp"
#include "roughreach/rde.hpp"
#include "roughreach/signature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace roughreach {

struct ControlSegment {
  std::vector<double> direction;  // u_k in R^n
  double duration = 0.0;          // tau_k > 0
};

struct ControlProgram {
  double horizon = 0.0;
  std::vector<ControlSegment> segments;

  std::vector<double> increment(std::size_t k) const {
    auto v = segments[k].direction;
    for (auto& c : v) c *= segments[k].duration;
    return v;
  }
};

/// Realizes the control as a piecewise-linear path from the origin by
/// cumulative summation of u_k tau_k.
inline PiecewiseLinearPath realize(const ControlProgram& control, int dim) {
  PiecewiseLinearPath path;
  path.dim = dim;
  path.times.push_back(0.0);
  path.points.push_back(std::vector<double>(dim, 0.0));
  double t = 0.0;
  for (std::size_t k = 0; k < control.segments.size(); ++k) {
    t += control.segments[k].duration;
    auto p = path.points.back();
    const auto inc = control.increment(k);
    for (int i = 0; i < dim; ++i) p[i] += inc[i];
    path.times.push_back(t);
    path.points.push_back(std::move(p));
  }
  return path;
}

enum class ReachStatus { Exact, Converged, Failed };

inline const char* to_string(ReachStatus s) {
  switch (s) {
    case ReachStatus::Exact: return "exact";
    case ReachStatus::Converged: return "converged";
    case ReachStatus::Failed: return "failed";
  }
  return "failed";
}

struct ReachReport {
  ReachStatus status = ReachStatus::Failed;
  ControlProgram control;
  std::vector<double> achieved;
  std::vector<double> target;
  double residual = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<double> scale(std::vector<double> v, double c) {
  for (auto& x : v) x *= c;
  return v;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

// Turns a list of segment increments into a control with durations
// proportional to the increment lengths, rescaled to the horizon.
inline ControlProgram program_from_increments(
    const std::vector<std::vector<double>>& increments, double horizon) {
  ControlProgram control;
  control.horizon = horizon;
  if (increments.empty()) return control;
  double total = 0.0;
  for (const auto& inc : increments) total += norm2(inc);
  double acc = 0.0;
  for (std::size_t k = 0; k < increments.size(); ++k) {
    // exact partition of the horizon even under rounding
    const double next = acc + norm2(increments[k]);
    const double tau = horizon * (next / total) - horizon * (acc / total);
    acc = next;
    control.segments.push_back({scale(increments[k], 1.0 / tau), tau});
  }
  return control;
}

}  // namespace detail

/// Constructive step-2 inversion: a line segment realizes the level-1 part,
/// then one square loop per coordinate plane realizes the remaining
/// pure-area factor. Pure-area elements commute in G^(2), so loop order is
/// immaterial. The realized path's depth-2 signature equals the target.
inline ControlProgram reach_step2_exact(const TruncatedTensor& target,
                                        double horizon) {
  if (target.depth != 2)
    throw std::invalid_argument("reach_step2_exact expects a depth-2 element");
  if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
  if (!shuffle_check(target, 1e-8).pass)
    throw std::domain_error("target not group-like");

  const int n = target.width;
  std::vector<std::vector<double>> increments;
  const std::vector<double> v = target.levels[1];
  if (detail::norm2(v) > 0.0) increments.push_back(v);

  // residual exp(v)^{-1} (x) target is pure-area: zero level-1,
  // antisymmetric level-2
  const TruncatedTensor residual =
      tensor_mul(segment_exp(detail::scale(v, -1.0), 2), target);
  const double cutoff = 1e-13 * std::max(1.0, max_abs(target));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double area = residual.levels[2][i * n + j];
      if (std::abs(area) <= cutoff) continue;
      const double side = std::sqrt(std::abs(area));
      std::vector<double> ei(n, 0.0), ej(n, 0.0);
      ei[area > 0.0 ? i : j] = side;
      ej[area > 0.0 ? j : i] = side;
      increments.push_back(ei);
      increments.push_back(ej);
      increments.push_back(detail::scale(ei, -1.0));
      increments.push_back(detail::scale(ej, -1.0));
    }
  auto control = detail::program_from_increments(increments, horizon);
  control.horizon = horizon;
  return control;
}

struct ShootingSettings {
  int segments = 4;
  double tol = 1e-6;
  int restarts = 8;
  std::uint64_t seed = 0;
  int max_iterations = 60;
  int substeps = kDefaultSubsteps;
  double fd_step = 1e-6;
};

namespace detail {

inline ControlProgram program_from_flat(const std::vector<double>& theta,
                                        int n, int segments, double horizon) {
  ControlProgram control;
  control.horizon = horizon;
  const double tau = horizon / segments;
  for (int k = 0; k < segments; ++k)
    control.segments.push_back(
        {std::vector<double>(theta.begin() + k * n,
                             theta.begin() + (k + 1) * n),
         tau});
  return control;
}

struct LMResult {
  std::vector<double> theta;
  double residual = 1e300;
  int iterations = 0;
  bool blew_up = false;
};

template <typename ResidualFn>
LMResult levenberg_marquardt(const ResidualFn& fn, std::vector<double> theta,
                             double tol, int max_iterations, double fd_step) {
  LMResult out;
  const int m = static_cast<int>(theta.size());
  Eigen::VectorXd r;
  try {
    r = fn(theta);
  } catch (const BlowUpError&) {
    out.blew_up = true;
    return out;
  }
  double cost = r.norm();
  double damping = 1e-3;
  for (int iter = 0; iter < max_iterations && cost > tol; ++iter) {
    ++out.iterations;
    Eigen::MatrixXd jac(r.size(), m);
    bool fd_ok = true;
    for (int c = 0; c < m; ++c) {
      auto probe = theta;
      probe[c] += fd_step;
      try {
        jac.col(c) = (fn(probe) - r) / fd_step;
      } catch (const BlowUpError&) {
        fd_ok = false;
        break;
      }
    }
    if (!fd_ok) break;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool improved = false;
    for (int trial = 0; trial < 8; ++trial) {
      Eigen::MatrixXd a = jtj;
      a.diagonal().array() += damping;
      const Eigen::VectorXd delta = a.ldlt().solve(-jtr);
      auto candidate = theta;
      for (int c = 0; c < m; ++c) candidate[c] += delta(c);
      Eigen::VectorXd rc;
      try {
        rc = fn(candidate);
      } catch (const BlowUpError&) {
        damping *= 10.0;
        continue;
      }
      if (rc.norm() < cost) {
        theta = std::move(candidate);
        r = std::move(rc);
        cost = r.norm();
        damping = std::max(damping / 3.0, 1e-12);
        improved = true;
        break;
      }
      damping *= 4.0;
    }
    if (!improved) break;
  }
  out.theta = std::move(theta);
  out.residual = cost;
  return out;
}

}  // namespace detail

/// Shooting search for a piecewise-linear control steering the ODE from xi
/// to target: K direction vectors with equal durations T/K, least-squares
/// terminal mismatch, multi-start Levenberg-Marquardt. Failure after all
/// restarts is a status, not an exception.
inline ReachReport reach_shooting(const VectorFieldFamily& family,
                                  const std::vector<double>& start,
                                  const std::vector<double>& target,
                                  double horizon,
                                  ShootingSettings settings = {}) {
  family.validate();
  if (!(settings.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (settings.segments < 1) throw std::invalid_argument("need K >= 1 segments");
  if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
  const int n = family.inputs, d = family.dim, K = settings.segments;

  auto residual_fn = [&](const std::vector<double>& theta) {
    const auto control =
        detail::program_from_flat(theta, n, K, horizon);
    const auto endpoint =
        solve_ode(family, realize(control, n), start, settings.substeps)
            .terminal();
    Eigen::VectorXd r(d);
    for (int i = 0; i < d; ++i) r(i) = endpoint[i] - target[i];
    return r;
  };

  // start list: zeros, an exact step-2 seed when available, a straight-line
  // seed when control and state dimensions agree, then random restarts
  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(K * n, 0.0));
  int sig_depth = 0, sig_width = 0;
  if (is_signature_ode_family(family, &sig_depth, &sig_width) &&
      sig_depth == 2) {
    try {
      const auto g = unflatten_tensor(target, sig_width, sig_depth);
      const auto exact = reach_step2_exact(g, horizon);
      if (static_cast<int>(exact.segments.size()) <= K) {
        std::vector<double> theta(K * n, 0.0);
        const double tau = horizon / K;
        for (std::size_t k = 0; k < exact.segments.size(); ++k) {
          const auto inc = exact.increment(k);
          for (int i = 0; i < n; ++i) theta[k * n + i] = inc[i] / tau;
        }
        starts.push_back(std::move(theta));
      }
    } catch (const std::exception&) {
      // target not group-like; no exact seed
    }
  }
  if (n == d) {
    std::vector<double> theta(K * n);
    for (int k = 0; k < K; ++k)
      for (int i = 0; i < n; ++i)
        theta[k * n + i] = (target[i] - start[i]) / horizon;
    starts.push_back(std::move(theta));
  }
  std::mt19937_64 rng(settings.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rstart = 0; rstart < settings.restarts; ++rstart) {
    std::vector<double> theta(K * n);
    for (auto& c : theta) c = gauss(rng);
    starts.push_back(std::move(theta));
  }

  ReachReport report;
  report.target = target;
  report.seed = settings.seed;
  detail::LMResult best;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    auto result = detail::levenberg_marquardt(
        residual_fn, starts[s], settings.tol, settings.max_iterations,
        settings.fd_step);
    report.iterations += result.iterations;
    if (result.blew_up) continue;
    ++report.restarts_used;
    const bool best_converged = best.residual <= settings.tol;
    const bool converged = result.residual <= settings.tol;
    if ((converged && !best_converged) ||
        (converged == best_converged && result.residual < best.residual))
      best = std::move(result);
    if (best.residual <= settings.tol && best.residual == 0.0) break;
  }

  if (best.theta.empty()) {
    report.status = ReachStatus::Failed;
    report.residual = best.residual;
    report.control.horizon = horizon;
    report.achieved = start;
    return report;
  }
  report.control = detail::program_from_flat(best.theta, n, K, horizon);
  report.achieved =
      solve_ode(family, realize(report.control, n), start, settings.substeps)
          .terminal();
  Eigen::VectorXd r(d);
  for (int i = 0; i < d; ++i) r(i) = report.achieved[i] - target[i];
  report.residual = r.norm();
  report.status = report.residual <= settings.tol ? ReachStatus::Converged
                                                  : ReachStatus::Failed;
  return report;
}

struct VerifySettings {
  double tol = 1e-9;
  ShootingSettings shooting;
  int rank_budget = 50;
  int rank_points = 0;  // 0: every partition point
  std::uint64_t seed = 0;
  int substeps = kDefaultSubsteps;
};

struct VerifyReport {
  ReachReport reach;
  RDESolution rde;
  RankProfile ranks;
  bool orbit_warning = false;  // rank inconstancy along the trajectory
};

/// End-to-end accessibility check: solve the RDE, construct a control
/// (exactly for the step-2 signature family, by shooting otherwise), and
/// verify the ODE reaches the same terminal point. Also reports rank
/// constancy of the estimated distribution along the RDE trajectory.
inline VerifyReport verify_accessibility(const VectorFieldFamily& family,
                                         const std::vector<double>& start,
                                         const RoughPathL2& driver,
                                         double horizon,
                                         VerifySettings settings = {}) {
  VerifyReport out;
  out.rde = solve_rde(family, driver, start, settings.substeps);
  const auto& terminal = out.rde.terminal();

  std::vector<std::vector<double>> sample_points = out.rde.states;
  if (settings.rank_points > 0 &&
      settings.rank_points < static_cast<int>(sample_points.size())) {
    std::vector<std::vector<double>> picked;
    const int m = static_cast<int>(sample_points.size());
    for (int k = 0; k < settings.rank_points; ++k)
      picked.push_back(
          sample_points[(k * (m - 1)) / std::max(1, settings.rank_points - 1)]);
    sample_points = std::move(picked);
  }
  out.ranks = rank_profile(family, sample_points, settings.rank_budget,
                           settings.seed);
  out.orbit_warning = !out.ranks.constant;

  int sig_depth = 0, sig_width = 0;
  if (is_signature_ode_family(family, &sig_depth, &sig_width) &&
      sig_depth == 2) {
    const auto g = unflatten_tensor(terminal, sig_width, sig_depth);
    out.reach.control = reach_step2_exact(g, horizon);
    out.reach.target = terminal;
    out.reach.seed = settings.seed;
    out.reach.achieved = solve_ode(family, realize(out.reach.control, sig_width),
                                   start, settings.substeps)
                             .terminal();
    double acc = 0.0;
    for (std::size_t i = 0; i < terminal.size(); ++i) {
      const double e = out.reach.achieved[i] - terminal[i];
      acc += e * e;
    }
    out.reach.residual = std::sqrt(acc);
    out.reach.status = out.reach.residual <= settings.tol ? ReachStatus::Exact
                                                          : ReachStatus::Failed;
    return out;
  }

  auto shooting = settings.shooting;
  shooting.tol = std::max(shooting.tol, settings.tol);
  shooting.seed = settings.seed;
  out.reach = reach_shooting(family, start, terminal, horizon, shooting);
  return out;
}

}  // namespace roughreach
