#pragma once

// Numerical estimation of the Sussmann distribution P_D(y): sampling
// pushforwards of the family along random compositions of flows, plus a
// bracket-based (Chow) cross-check and rank profiles along trajectories.

#include "roughreach/flow.hpp"
#include "roughreach/vector_field.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace roughreach {

struct OrbitSettings {
  double time_amplitude = 0.3;   // stage times uniform in [-tau, tau]
  double mean_length = 2.0;      // geometric stage-count distribution
  double rank_tol = 1e-8;        // relative singular-value threshold
  IntegratorSettings integrator;
};

struct SpanningVector {
  std::vector<double> vector;
  DDiffeo generator;
  int field_index = 0;
};

struct DistributionEstimate {
  std::vector<double> base_point;
  std::vector<SpanningVector> vectors;
  std::vector<double> singular_values;
  int rank = 0;
  std::vector<std::vector<double>> basis;  // orthonormal, one vector per row
  int samples_used = 0;
  int samples_failed = 0;
};

namespace detail {

// splitmix64; decorrelates per-sample seeds from a master seed
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline void svd_rank(const std::vector<SpanningVector>& vecs, int d,
                     double rank_tol, DistributionEstimate& out) {
  if (vecs.empty()) {
    out.rank = 0;
    out.singular_values.clear();
    out.basis.clear();
    return;
  }
  Eigen::MatrixXd m(d, static_cast<int>(vecs.size()));
  for (int c = 0; c < static_cast<int>(vecs.size()); ++c)
    for (int r = 0; r < d; ++r) m(r, c) = vecs[c].vector[r];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cutoff = sv.size() ? rank_tol * sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  out.rank = rank;
  out.basis.assign(rank, std::vector<double>(d));
  for (int i = 0; i < rank; ++i)
    for (int r = 0; r < d; ++r) out.basis[i][r] = svd.matrixU()(r, i);
}

}  // namespace detail

/// Estimates P_D(y) by collecting g_*(f^i(g^{-1}(y))) for random
/// D-diffeomorphisms g. Deterministic given the seed; the sample sequence
/// is a fixed prefix, so the estimate is monotone in the budget.
inline DistributionEstimate distribution_rank(const VectorFieldFamily& family,
                                              const std::vector<double>& y,
                                              int budget, std::uint64_t seed,
                                              OrbitSettings settings = {}) {
  family.validate();
  if (budget < 0) throw std::invalid_argument("budget must be >= 0");
  const int d = family.dim;
  DistributionEstimate est;
  est.base_point = y;

  // length-0 diffeomorphisms: the family itself at y
  for (int i = 0; i < family.inputs; ++i)
    est.vectors.push_back({eval_field(family.fields[i], y), DDiffeo{}, i});
  detail::svd_rank(est.vectors, d, settings.rank_tol, est);

  const double p_stop = 1.0 / (settings.mean_length + 1.0);
  for (int k = 0; k < budget && est.rank < d; ++k) {
    std::mt19937_64 rng(detail::mix_seed(seed, static_cast<std::uint64_t>(k)));
    std::geometric_distribution<int> length_dist(p_stop);
    std::uniform_int_distribution<int> index_dist(0, family.inputs - 1);
    std::uniform_real_distribution<double> time_dist(-settings.time_amplitude,
                                                     settings.time_amplitude);
    DDiffeo g;
    const int len = length_dist(rng);
    for (int s = 0; s < len; ++s)
      g.stages.push_back({index_dist(rng), time_dist(rng)});

    try {
      const auto z = apply_ddiffeo(family, inverse_ddiffeo(g), y,
                                   settings.integrator);
      const auto jac = pushforward(family, g, z, settings.integrator);
      for (int i = 0; i < family.inputs; ++i) {
        const auto v = eval_field(family.fields[i], z);
        std::vector<double> pushed(d, 0.0);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) pushed[r] += jac[r][c] * v[c];
        est.vectors.push_back({std::move(pushed), g, i});
      }
      ++est.samples_used;
    } catch (const BlowUpError&) {
      ++est.samples_failed;
      continue;
    }
    detail::svd_rank(est.vectors, d, settings.rank_tol, est);
  }
  if (budget > 0 && est.samples_used == 0 && est.samples_failed == budget)
    throw std::runtime_error("distribution_rank: every sampled flow blew up");
  return est;
}

struct BracketSpan {
  int rank = 0;
  std::vector<std::vector<double>> basis;
  std::vector<double> singular_values;
};

/// Rank of all right-nested iterated brackets of depth <= L evaluated at y.
/// A lower bound for dim P_D(y), exact for bracket-generating families.
inline BracketSpan bracket_span_rank(const VectorFieldFamily& family,
                                     const std::vector<double>& y, int depth,
                                     double rank_tol = 1e-8) {
  family.validate();
  if (depth < 1) throw std::invalid_argument("bracket depth must be >= 1");
  std::vector<VectorField> current = family.fields;
  std::vector<SpanningVector> vecs;
  for (int i = 0; i < family.inputs; ++i)
    vecs.push_back({eval_field(family.fields[i], y), DDiffeo{}, i});
  for (int l = 2; l <= depth; ++l) {
    std::vector<VectorField> next;
    for (const auto& b : current)
      for (int i = 0; i < family.inputs; ++i) {
        auto br = lie_bracket(b, family.fields[i], family.dim);
        vecs.push_back({eval_field(br, y), DDiffeo{}, i});
        next.push_back(std::move(br));
      }
    current = std::move(next);
  }
  DistributionEstimate tmp;
  detail::svd_rank(vecs, family.dim, rank_tol, tmp);
  return {tmp.rank, std::move(tmp.basis), std::move(tmp.singular_values)};
}

struct RankProfile {
  std::vector<int> ranks;
  bool constant = true;
};

inline RankProfile rank_profile(const VectorFieldFamily& family,
                                const std::vector<std::vector<double>>& points,
                                int budget, std::uint64_t seed,
                                OrbitSettings settings = {}) {
  if (points.empty()) throw std::invalid_argument("rank_profile needs points");
  RankProfile profile;
  for (const auto& p : points)
    profile.ranks.push_back(
        distribution_rank(family, p, budget, seed, settings).rank);
  for (int r : profile.ranks)
    if (r != profile.ranks.front()) profile.constant = false;
  return profile;
}

}  // namespace roughreach
