// Acceptance suite: one test case per criterion, each printing its own
// pass/fail line with the measured quantity.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "roughreach/orbit.hpp"
#include "roughreach/rde.hpp"
#include "roughreach/reach.hpp"
#include "roughreach/signature.hpp"

#include <chrono>
#include <cstdio>

#include "oracles.hpp"

using namespace roughreach;

namespace {

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, bool pass, const char* fmt, double value) {
  std::printf("[%s] %s  (", name, pass ? "PASS" : "FAIL");
  std::printf(fmt, value);
  std::printf(")\n");
}

}  // namespace

TEST_CASE("criterion 1: oscillating-path signature") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sig = sig_pl(sample_oscillating(5, 20000), 2).group;
  const double seconds = elapsed_seconds(t0);

  const double level1_err =
      std::max(std::abs(sig.levels[1][0]), std::abs(sig.levels[1][1]));
  double level2_err = 0.0;
  const double expected[4] = {0.0, M_PI, -M_PI, 0.0};
  for (int k = 0; k < 4; ++k)
    level2_err = std::max(level2_err, std::abs(sig.levels[2][k] - expected[k]));

  const bool pass_l1 = level1_err < 1e-10;
  const bool pass_l2 = level2_err < 1e-6;
  const bool pass_time = seconds < 2.0;
  report("criterion 1: level-1 zero", pass_l1, "max |level1| = %.3g", level1_err);
  report("criterion 1: level-2 area pi", pass_l2,
         "max level-2 error = %.3g", level2_err);
  report("criterion 1: runtime < 2 s", pass_time, "%.3f s", seconds);
  CHECK(pass_l1);
  CHECK(pass_l2);
  CHECK(pass_time);
}

TEST_CASE("criterion 2: signature-ODE identity at depth 3") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fam = make_signature_ode_family(3, 2);
  const auto start = flatten_tensor(tensor_identity(2, 3));
  auto rng = oracles::rng(2026);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto path = oracles::random_path(rng, 2, 5, 0.8);
    const auto sol = solve_ode(fam, path, start);
    const auto expected = flatten_tensor(sig_pl(path, 3).group);
    for (int i = 0; i < fam.dim; ++i)
      worst = std::max(worst, std::abs(sol.terminal()[i] - expected[i]));
  }
  const double seconds = elapsed_seconds(t0);
  const bool pass = worst < 1e-9;
  const bool pass_time = seconds < 10.0;
  report("criterion 2: ODE = signature", pass, "worst coefficient error = %.3g",
         worst);
  report("criterion 2: runtime < 10 s", pass_time, "%.3f s", seconds);
  CHECK(pass);
  CHECK(pass_time);
}

TEST_CASE("criterion 3: pure-area RDE terminal") {
  const auto fam = make_signature_ode_family(2, 2);
  const auto start = flatten_tensor(tensor_identity(2, 2));
  const auto sol = solve_rde(fam, pure_area(2, 1, 2, M_PI, 1), start);
  const double expected[7] = {1, 0, 0, 0, M_PI, -M_PI, 0};
  double worst = 0.0;
  for (int i = 0; i < 7; ++i)
    worst = std::max(worst, std::abs(sol.terminal()[i] - expected[i]));
  const bool pass = worst < 1e-12;
  report("criterion 3: pure-area RDE", pass, "worst coefficient error = %.3g",
         worst);
  CHECK(pass);
}

TEST_CASE("criterion 4: accessibility round trip") {
  const auto fam = make_signature_ode_family(2, 2);
  const auto start = flatten_tensor(tensor_identity(2, 2));
  VerifySettings settings;
  settings.tol = 1e-9;
  const auto result = verify_accessibility(fam, start,
                                           pure_area(2, 1, 2, M_PI, 1), 1.0,
                                           settings);
  const bool pass_status = result.reach.status == ReachStatus::Exact;
  const bool pass_segments = result.reach.control.segments.size() <= 5;
  const bool pass_residual = result.reach.residual < 1e-9;
  report("criterion 4: status exact", pass_status, "residual = %.3g",
         result.reach.residual);
  report("criterion 4: <= 5 segments", pass_segments, "segments = %g",
         static_cast<double>(result.reach.control.segments.size()));
  report("criterion 4: ODE terminal within 1e-9", pass_residual,
         "residual = %.3g", result.reach.residual);
  CHECK(pass_status);
  CHECK(pass_segments);
  CHECK(pass_residual);
}

TEST_CASE("criterion 5: orbit ranks") {
  const auto demo = make_bracket_demo_family();
  const int flow_rank = distribution_rank(demo, {0.0, 0.0}, 50, 0).rank;
  const int chow_rank = bracket_span_rank(demo, {0.0, 0.0}, 2).rank;
  const auto rot = make_rotation_family();
  const int rot_origin = distribution_rank(rot, {0.0, 0.0}, 50, 0).rank;
  const int rot_unit = distribution_rank(rot, {1.0, 0.0}, 50, 0).rank;
  const bool pass = flow_rank == 2 && chow_rank == 2 && rot_origin == 0 &&
                    rot_unit == 1;
  report("criterion 5: orbit ranks", pass,
         "ranks (flow, chow, rot0, rot1) = %.0f",
         flow_rank * 1000.0 + chow_rank * 100.0 + rot_origin * 10.0 + rot_unit);
  CHECK(flow_rank == 2);
  CHECK(chow_rank == 2);
  CHECK(rot_origin == 0);
  CHECK(rot_unit == 1);
}

TEST_CASE("criterion 6: trajectory stays on the orbit") {
  const auto fam = make_bracket_demo_family();
  const auto sol = solve_rde(fam, pure_area(2, 1, 2, 1.0, 9), {0.0, 0.0});
  REQUIRE(sol.states.size() == 10);
  const auto profile = rank_profile(fam, sol.states, 50, 0);
  bool pass = profile.constant;
  for (int r : profile.ranks) pass = pass && r == 2;
  report("criterion 6: rank constant = 2 at 10 points", pass,
         "first rank = %.0f", static_cast<double>(profile.ranks.front()));
  CHECK(pass);
}

TEST_CASE("criterion 7: shooting reachability") {
  const auto fam = make_rotation_family();
  const auto t0 = std::chrono::steady_clock::now();
  ShootingSettings settings;
  settings.segments = 1;
  settings.tol = 1e-6;
  const auto on_orbit = reach_shooting(fam, {1.0, 0.0}, {0.0, 1.0}, 1.0, settings);
  const double seconds = elapsed_seconds(t0);
  const bool pass_on = on_orbit.status == ReachStatus::Converged && seconds < 5.0;
  report("criterion 7: (1,0) -> (0,1) converges < 5 s", pass_on,
         "residual = %.3g", on_orbit.residual);

  ShootingSettings off_settings;
  off_settings.segments = 3;
  off_settings.restarts = 4;
  const auto off_orbit =
      reach_shooting(fam, {1.0, 0.0}, {2.0, 0.0}, 1.0, off_settings);
  const bool pass_off =
      off_orbit.status == ReachStatus::Failed && off_orbit.residual >= 0.9;
  report("criterion 7: (1,0) -> (2,0) fails with residual >= 0.9", pass_off,
         "residual = %.3g", off_orbit.residual);
  CHECK(pass_on);
  CHECK(pass_off);
}

TEST_CASE("criterion 8: randomized property suites") {
  const auto t0 = std::chrono::steady_clock::now();
  auto rng = oracles::rng(808);
  bool pass = true;

  // Chen identity, 100 random splits
  for (int rep = 0; rep < 100; ++rep) {
    const auto path = oracles::random_path(rng, 2, 6);
    const std::size_t split = 1 + rep % 5;
    PiecewiseLinearPath left(2, {path.times.begin(), path.times.begin() + split + 1},
                             {path.points.begin(), path.points.begin() + split + 1});
    PiecewiseLinearPath right(2, {path.times.begin() + split, path.times.end()},
                              {path.points.begin() + split, path.points.end()});
    const auto glued = tensor_mul(sig_pl(left, 3).group, sig_pl(right, 3).group);
    pass = pass && max_abs(glued - sig_pl(path, 3).group) < 1e-10;
  }

  // shuffle relations on 100 signatures
  for (int rep = 0; rep < 100; ++rep)
    pass = pass &&
           shuffle_check(sig_pl(oracles::random_path(rng, 2, 4), 3).group, 1e-10)
               .pass;

  // exp/log inversion, 100 cases
  for (int rep = 0; rep < 100; ++rep) {
    auto x = oracles::random_tensor(rng, 2, 4, 0.8);
    x.scalar() = 0.0;
    pass = pass && max_abs(tensor_log(tensor_exp(x)) - x) < 1e-12;
  }

  // flow group law, 100 cases
  const auto rot = make_rotation_family();
  for (int rep = 0; rep < 100; ++rep) {
    const double s = oracles::uniform(rng, -1, 1);
    const double t = oracles::uniform(rng, -1, 1);
    const std::vector<double> y = {oracles::uniform(rng, -1, 1),
                                   oracles::uniform(rng, -1, 1)};
    const auto two = flow(rot, 0, t, flow(rot, 0, s, y));
    const auto one = flow(rot, 0, t + s, y);
    pass = pass && std::hypot(two[0] - one[0], two[1] - one[1]) < 1e-9;
  }

  // pushforward vs finite differences, 100 cases
  const auto demo = make_bracket_demo_family();
  for (int rep = 0; rep < 100; ++rep) {
    const DDiffeo g{{{rep % 2, oracles::uniform(rng, -0.4, 0.4)},
                     {(rep + 1) % 2, oracles::uniform(rng, -0.4, 0.4)}}};
    const std::vector<double> y = {oracles::uniform(rng, -0.5, 0.5),
                                   oracles::uniform(rng, -0.5, 0.5)};
    const auto jac = pushforward(demo, g, y);
    const double h = 1e-5;
    for (int col = 0; col < 2; ++col) {
      auto plus = y, minus = y;
      plus[col] += h;
      minus[col] -= h;
      const auto fp = apply_ddiffeo(demo, g, plus);
      const auto fm = apply_ddiffeo(demo, g, minus);
      for (int row = 0; row < 2; ++row) {
        const double fd = (fp[row] - fm[row]) / (2 * h);
        pass = pass &&
               std::abs(jac[row][col] - fd) / (1 + std::abs(jac[row][col])) < 1e-4;
      }
    }
  }

  // bracket antisymmetry, 100 random points
  const auto b01 = lie_bracket(demo, 0, 1);
  const auto b10 = lie_bracket(demo, 1, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const std::vector<double> y = {oracles::uniform(rng, -2, 2),
                                   oracles::uniform(rng, -2, 2)};
    for (int c = 0; c < 2; ++c)
      pass = pass && std::abs(eval(b01[c], y) + eval(b10[c], y)) < 1e-10;
  }

  const double seconds = elapsed_seconds(t0);
  const bool pass_time = seconds < 60.0;
  report("criterion 8: property suites", pass, "%.0f00 cases per suite, 6 suites",
         1.0);
  report("criterion 8: runtime < 60 s", pass_time, "%.3f s", seconds);
  CHECK(pass);
  CHECK(pass_time);
}
