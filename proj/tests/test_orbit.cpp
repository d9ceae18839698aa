#include "roughreach/orbit.hpp"
#include "roughreach/rde.hpp"

#include <doctest.h>

#include "oracles.hpp"

using namespace roughreach;

namespace {

VectorFieldFamily constant_frame(int d) {
  VectorFieldFamily fam;
  fam.dim = d;
  fam.inputs = d;
  for (int i = 0; i < d; ++i) {
    VectorField f(d, make_const(0.0));
    f[i] = make_const(1.0);
    fam.fields.push_back(std::move(f));
  }
  return fam;
}

}  // namespace

TEST_CASE("constant frame spans immediately") {
  const auto fam = constant_frame(3);
  const auto est = distribution_rank(fam, {0.2, -0.1, 0.5}, 0, 0);
  CHECK(est.rank == 3);
  CHECK(est.samples_used == 0);
  // basis is orthonormal
  for (std::size_t i = 0; i < est.basis.size(); ++i)
    for (std::size_t j = 0; j < est.basis.size(); ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += est.basis[i][k] * est.basis[j][k];
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("rotation field vanishes at the fixed point") {
  const auto fam = make_rotation_family();
  CHECK(distribution_rank(fam, {0.0, 0.0}, 50, 0).rank == 0);
  CHECK(distribution_rank(fam, {1.0, 0.0}, 20, 0).rank == 1);
}

TEST_CASE("bracket-demo reaches rank 2 at the origin through flows") {
  const auto fam = make_bracket_demo_family();
  const auto est = distribution_rank(fam, {0.0, 0.0}, 50, 0);
  CHECK(est.rank == 2);
  // naive span at the origin is rank 1: f2 vanishes there
  CHECK(bracket_span_rank(fam, {0.0, 0.0}, 1).rank == 1);
}

TEST_CASE("bracket span ranks") {
  CHECK(bracket_span_rank(constant_frame(3), {0.1, 0.2, 0.3}, 1).rank == 3);
  CHECK(bracket_span_rank(make_bracket_demo_family(), {0.0, 0.0}, 2).rank == 2);
  const auto rot = make_rotation_family();
  for (int depth = 1; depth <= 3; ++depth) {
    CHECK(bracket_span_rank(rot, {0.7, 0.7}, depth).rank == 1);
    CHECK(bracket_span_rank(rot, {0.0, 0.0}, depth).rank == 0);
  }
}

TEST_CASE("estimated rank dominates the naive span and is budget-monotone") {
  const auto fam = make_bracket_demo_family();
  int previous = 0;
  for (int budget : {0, 5, 15, 50}) {
    const auto est = distribution_rank(fam, {0.0, 0.0}, budget, 0);
    CHECK(est.rank >= previous);
    CHECK(est.rank <= fam.dim);
    previous = est.rank;
  }
  CHECK(previous == 2);
}

TEST_CASE("determinism under a fixed seed") {
  const auto fam = make_bracket_demo_family();
  const auto a = distribution_rank(fam, {0.3, 0.1}, 25, 42);
  const auto b = distribution_rank(fam, {0.3, 0.1}, 25, 42);
  CHECK(a.rank == b.rank);
  REQUIRE(a.singular_values.size() == b.singular_values.size());
  for (std::size_t i = 0; i < a.singular_values.size(); ++i)
    CHECK(a.singular_values[i] == b.singular_values[i]);
}

TEST_CASE("flow and bracket characterizations agree on test families") {
  const std::vector<double> y = {0.4, -0.2};
  for (const auto& fam :
       {constant_frame(2), make_bracket_demo_family()}) {
    CHECK(distribution_rank(fam, y, 50, 0).rank ==
          bracket_span_rank(fam, y, 3).rank);
  }
  const auto rot = make_rotation_family();
  CHECK(distribution_rank(rot, {1.0, 0.0}, 50, 0).rank ==
        bracket_span_rank(rot, {1.0, 0.0}, 3).rank);
}

TEST_CASE("rank is invariant under sampled D-diffeomorphisms") {
  const auto fam = make_bracket_demo_family();
  auto rng = oracles::rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    DDiffeo g;
    const int len = 1 + rep % 3;
    for (int s = 0; s < len; ++s)
      g.stages.push_back({s % 2, oracles::uniform(rng, -0.3, 0.3)});
    const std::vector<double> y = {oracles::uniform(rng, -0.5, 0.5),
                                   oracles::uniform(rng, -0.5, 0.5)};
    const auto there = apply_ddiffeo(fam, g, y);
    CHECK(distribution_rank(fam, y, 50, 7).rank ==
          distribution_rank(fam, there, 50, 7).rank);
  }
}

TEST_CASE("rank profile along trajectories") {
  const auto frame = constant_frame(2);
  const auto profile_frame =
      rank_profile(frame, {{0, 0}, {1, 0}, {0, 1}}, 10, 0);
  CHECK(profile_frame.constant);
  CHECK(profile_frame.ranks == std::vector<int>{2, 2, 2});

  // RDE trajectory of the bracket demo driven by a pure-area path
  const auto fam = make_bracket_demo_family();
  const auto sol = solve_rde(fam, pure_area(2, 1, 2, 1.0, 5), {0.0, 0.0});
  const auto profile = rank_profile(fam, sol.states, 50, 0);
  CHECK(profile.constant);
  for (int r : profile.ranks) CHECK(r == 2);

  // rotation orbit: the unit circle, rank constantly 1
  const auto rot = make_rotation_family();
  std::vector<std::vector<double>> circle;
  for (int k = 0; k < 6; ++k)
    circle.push_back({std::cos(k * 1.0), std::sin(k * 1.0)});
  const auto profile_rot = rank_profile(rot, circle, 30, 0);
  CHECK(profile_rot.constant);
  for (int r : profile_rot.ranks) CHECK(r == 1);
}

TEST_CASE("auditability: every collected vector carries its generator") {
  const auto fam = make_bracket_demo_family();
  const auto est = distribution_rank(fam, {0.0, 0.0}, 10, 0);
  for (const auto& sv : est.vectors) {
    // recompute g_*(f^i(g^{-1}(y))) from the recorded generator
    const auto z =
        apply_ddiffeo(fam, inverse_ddiffeo(sv.generator), {0.0, 0.0});
    const auto jac = pushforward(fam, sv.generator, z);
    const auto v = eval_field(fam.fields[sv.field_index], z);
    for (int r = 0; r < 2; ++r) {
      double acc = 0.0;
      for (int c = 0; c < 2; ++c) acc += jac[r][c] * v[c];
      CHECK(std::abs(acc - sv.vector[r]) < 1e-12);
    }
  }
}
