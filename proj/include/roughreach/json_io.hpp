#pragma once

// JSON (de)serialization for every type crossing the CLI boundary.

#include "roughreach/expr.hpp"
#include "roughreach/orbit.hpp"
#include "roughreach/path.hpp"
#include "roughreach/reach.hpp"
#include "roughreach/rough_path.hpp"
#include "roughreach/tensor.hpp"
#include "roughreach/vector_field.hpp"

#include <json.hpp>

#include <string>

namespace roughreach {

using nlohmann::json;

inline json to_json(const TruncatedTensor& t) {
  return json{{"n", t.width}, {"N", t.depth}, {"levels", t.levels}};
}

inline TruncatedTensor tensor_from_json(const json& j) {
  TruncatedTensor t(j.at("n").get<int>(), j.at("N").get<int>());
  const auto& levels = j.at("levels");
  if (levels.size() != t.levels.size())
    throw std::invalid_argument("tensor JSON: wrong number of levels");
  for (std::size_t k = 0; k < t.levels.size(); ++k) {
    const auto lv = levels[k].get<std::vector<double>>();
    if (lv.size() != t.levels[k].size())
      throw std::invalid_argument("tensor JSON: level " + std::to_string(k) +
                                  " has wrong length");
    t.levels[k] = lv;
  }
  if (!t.finite())
    throw std::invalid_argument("tensor JSON: non-finite coefficient");
  return t;
}

inline json to_json(const PiecewiseLinearPath& p) {
  return json{{"n", p.dim}, {"times", p.times}, {"points", p.points}};
}

inline PiecewiseLinearPath path_from_json(const json& j) {
  PiecewiseLinearPath p;
  p.dim = j.at("n").get<int>();
  p.times = j.at("times").get<std::vector<double>>();
  p.points = j.at("points").get<std::vector<std::vector<double>>>();
  p.validate();
  return p;
}

inline json to_json(const VectorFieldFamily& f) {
  if (!f.builtin_tag.empty()) {
    if (int N = 0, n = 0; is_signature_ode_family(f, &N, &n))
      return json{{"builtin", "signature-ode"}, {"N", N}, {"n", n}};
    return json{{"builtin", f.builtin_tag}};
  }
  std::vector<std::vector<std::string>> fields;
  for (const auto& field : f.fields) {
    std::vector<std::string> comps;
    for (const auto& e : field) comps.push_back(print_expr(e));
    fields.push_back(std::move(comps));
  }
  return json{{"d", f.dim}, {"n", f.inputs}, {"fields", fields}};
}

inline VectorFieldFamily family_from_json(const json& j) {
  if (j.contains("builtin")) {
    const auto name = j.at("builtin").get<std::string>();
    if (name == "signature-ode")
      return make_signature_ode_family(j.at("N").get<int>(),
                                       j.at("n").get<int>());
    if (name == "rotation") return make_rotation_family();
    if (name == "bracket-demo") return make_bracket_demo_family();
    throw std::invalid_argument("unknown builtin family '" + name + "'");
  }
  VectorFieldFamily f;
  f.dim = j.at("d").get<int>();
  f.inputs = j.at("n").get<int>();
  for (const auto& field : j.at("fields")) {
    VectorField vf;
    for (const auto& comp : field)
      vf.push_back(parse_expr(comp.get<std::string>(), f.dim));
    f.fields.push_back(std::move(vf));
  }
  f.validate();
  return f;
}

inline json to_json(const LogIncrement& inc) {
  return json{{"lambda", inc.lambda}, {"mu", inc.mu}};
}

inline json to_json(const RoughPathL2& x) {
  json incs = json::array();
  for (const auto& inc : x.increments) incs.push_back(to_json(inc));
  return json{{"n", x.dim},
              {"times", x.times},
              {"increments", incs},
              {"start", x.start}};
}

inline RoughPathL2 rough_path_from_json(const json& j) {
  RoughPathL2 x;
  x.dim = j.at("n").get<int>();
  x.times = j.at("times").get<std::vector<double>>();
  for (const auto& inc : j.at("increments"))
    x.increments.push_back(
        {inc.at("lambda").get<std::vector<double>>(),
         inc.at("mu").get<std::vector<std::vector<double>>>()});
  if (j.contains("start"))
    x.start = j.at("start").get<std::vector<double>>();
  else
    x.start.assign(x.dim, 0.0);
  x.validate();
  return x;
}

inline json to_json(const ControlProgram& c) {
  json segs = json::array();
  for (const auto& s : c.segments)
    segs.push_back(json{{"direction", s.direction}, {"duration", s.duration}});
  return json{{"horizon", c.horizon}, {"segments", segs}};
}

inline ControlProgram control_from_json(const json& j) {
  ControlProgram c;
  c.horizon = j.at("horizon").get<double>();
  for (const auto& s : j.at("segments"))
    c.segments.push_back({s.at("direction").get<std::vector<double>>(),
                          s.at("duration").get<double>()});
  return c;
}

inline json to_json(const ReachReport& r) {
  return json{{"status", to_string(r.status)},
              {"control", to_json(r.control)},
              {"achieved", r.achieved},
              {"target", r.target},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"restarts_used", r.restarts_used},
              {"seed", r.seed}};
}

inline json to_json(const RDESolution& s) {
  return json{{"times", s.times},
              {"states", s.states},
              {"terminal", s.terminal()},
              {"scheme", s.scheme},
              {"substeps", s.substeps}};
}

inline json to_json(const DistributionEstimate& e) {
  json generators = json::array();
  for (const auto& v : e.vectors) {
    json stages = json::array();
    for (const auto& [idx, t] : v.generator.stages)
      stages.push_back(json{{"field", idx + 1}, {"time", t}});
    generators.push_back(json{{"field", v.field_index + 1},
                              {"stages", stages},
                              {"vector", v.vector}});
  }
  return json{{"rank", e.rank},
              {"singular_values", e.singular_values},
              {"generators", generators},
              {"samples_used", e.samples_used},
              {"samples_failed", e.samples_failed}};
}

inline json to_json(const VerifyReport& r) {
  return json{{"reach", to_json(r.reach)},
              {"trajectory", to_json(r.rde)},
              {"ranks", r.ranks.ranks},
              {"rank_constant", r.ranks.constant},
              {"orbit_warning", r.orbit_warning}};
}

}  // namespace roughreach
