// Command-line surface: JSON in, JSON out, deterministic under fixed seeds.
// Exit codes: 0 success, 1 input error, 2 reach search failed.

#include "roughreach/json_io.hpp"
#include "roughreach/rde.hpp"
#include "roughreach/reach.hpp"
#include "roughreach/signature.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace roughreach;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
  return json::parse(in);  // parse errors carry byte positions
}

std::vector<double> parse_vector(const std::string& text) {
  return json::parse(text).get<std::vector<double>>();
}

void emit(const json& j, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(output_path);
    if (!out)
      throw std::invalid_argument("cannot write file '" + output_path + "'");
    out << j.dump(2) << "\n";
  }
}

int thread_cap_default() {
  if (const char* env = std::getenv("ROUGHREACH_THREADS"))
    return std::max(1, std::atoi(env));
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rough-path accessibility toolkit"};
  app.require_subcommand(1);

  std::string output_path;
  int threads = thread_cap_default();
  app.add_option("--output", output_path, "write the JSON report to a file");
  app.add_option("--threads", threads, "cap on worker threads")
      ->check(CLI::PositiveNumber);

  // sig
  auto* sig_cmd = app.add_subcommand("sig", "truncated signature of a path");
  std::string sig_path_file;
  int sig_depth = 2, osc_n = 0, osc_segments = 0;
  sig_cmd->add_option("--path", sig_path_file, "path JSON file");
  sig_cmd->add_option("--depth", sig_depth, "truncation depth")->check(CLI::PositiveNumber);
  sig_cmd->add_option("--oscillating", osc_n, "sample the oscillating family x(n)");
  sig_cmd->add_option("--segments", osc_segments, "segment count for the sampler");

  // flow
  auto* flow_cmd = app.add_subcommand("flow", "flow of one vector field");
  std::string flow_vf, flow_start;
  int flow_index = 1;
  double flow_time = 0.0, flow_step = 0.0;
  bool flow_jacobian = false;
  flow_cmd->add_option("--vf", flow_vf, "vector field family JSON file")->required();
  flow_cmd->add_option("--index", flow_index, "field index (1-based)");
  flow_cmd->add_option("--time", flow_time, "flow time (signed)")->required();
  flow_cmd->add_option("--start", flow_start, "start point, JSON array")->required();
  flow_cmd->add_option("--step", flow_step, "fixed integrator step");
  flow_cmd->add_flag("--jacobian", flow_jacobian, "also report the pushforward");

  // orbit-rank
  auto* orbit_cmd = app.add_subcommand("orbit-rank", "estimate dim P_D(y)");
  std::string orbit_vf, orbit_point;
  int orbit_budget = 50, orbit_depth = 0;
  std::uint64_t orbit_seed = 0;
  orbit_cmd->add_option("--vf", orbit_vf, "vector field family JSON file")->required();
  orbit_cmd->add_option("--point", orbit_point, "base point, JSON array")->required();
  orbit_cmd->add_option("--budget", orbit_budget, "sample budget");
  orbit_cmd->add_option("--seed", orbit_seed, "sampling seed");
  orbit_cmd->add_option("--depth", orbit_depth,
                        "bracket mode: rank of iterated brackets up to this depth");

  // solve-ode / solve-rde
  auto* ode_cmd = app.add_subcommand("solve-ode", "controlled ODE driven by a PL path");
  std::string ode_vf, ode_path, ode_start;
  int ode_substeps = kDefaultSubsteps;
  ode_cmd->add_option("--vf", ode_vf, "vector field family JSON file")->required();
  ode_cmd->add_option("--path", ode_path, "driving path JSON file")->required();
  ode_cmd->add_option("--start", ode_start, "initial state, JSON array");
  ode_cmd->add_option("--substeps", ode_substeps, "RK4 substeps per segment");

  auto* rde_cmd = app.add_subcommand("solve-rde", "level-2 RDE via the log-ODE scheme");
  std::string rde_vf, rde_rough, rde_start;
  int rde_substeps = kDefaultSubsteps;
  rde_cmd->add_option("--vf", rde_vf, "vector field family JSON file")->required();
  rde_cmd->add_option("--rough", rde_rough, "rough path JSON file")->required();
  rde_cmd->add_option("--start", rde_start, "initial state, JSON array");
  rde_cmd->add_option("--substeps", rde_substeps, "RK4 substeps per interval");

  // reach
  auto* reach_cmd = app.add_subcommand("reach", "piecewise-linear control to a target");
  std::string reach_vf, reach_start, reach_target, reach_rough;
  double reach_horizon = 1.0, reach_tol = 1e-6;
  int reach_segments = 4, reach_restarts = 8;
  std::uint64_t reach_seed = 0;
  reach_cmd->add_option("--vf", reach_vf, "vector field family JSON file")->required();
  reach_cmd->add_option("--start", reach_start, "initial state, JSON array");
  reach_cmd->add_option("--target", reach_target, "target state, JSON array");
  reach_cmd->add_option("--rough", reach_rough,
                        "rough path JSON file; its RDE terminal becomes the target");
  reach_cmd->add_option("--horizon", reach_horizon, "control horizon T");
  reach_cmd->add_option("--segments", reach_segments, "number of control segments K");
  reach_cmd->add_option("--tol", reach_tol, "terminal residual tolerance");
  reach_cmd->add_option("--restarts", reach_restarts, "random restarts");
  reach_cmd->add_option("--seed", reach_seed, "restart seed");

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "end-to-end accessibility check for a rough driver");
  std::string verify_vf, verify_rough, verify_start;
  double verify_horizon = 1.0, verify_tol = 1e-9;
  int verify_segments = 4, verify_restarts = 8;
  std::uint64_t verify_seed = 0;
  verify_cmd->add_option("--vf", verify_vf, "vector field family JSON file")->required();
  verify_cmd->add_option("--rough", verify_rough, "rough path JSON file")->required();
  verify_cmd->add_option("--start", verify_start, "initial state, JSON array");
  verify_cmd->add_option("--horizon", verify_horizon, "control horizon T");
  verify_cmd->add_option("--tol", verify_tol, "verification tolerance");
  verify_cmd->add_option("--segments", verify_segments, "shooting segments K");
  verify_cmd->add_option("--restarts", verify_restarts, "shooting restarts");
  verify_cmd->add_option("--seed", verify_seed, "seed for shooting and rank sampling");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sig_cmd) {
      PiecewiseLinearPath path;
      if (osc_n > 0) {
        if (osc_segments < 1)
          throw std::invalid_argument("--oscillating requires --segments");
        path = sample_oscillating(osc_n, osc_segments);
      } else if (!sig_path_file.empty()) {
        path = path_from_json(read_json_file(sig_path_file));
      } else {
        throw std::invalid_argument("sig needs --path or --oscillating");
      }
      emit(to_json(sig_pl(path, sig_depth).group), output_path);
    } else if (*flow_cmd) {
      const auto family = family_from_json(read_json_file(flow_vf));
      if (flow_index < 1 || flow_index > family.inputs)
        throw std::invalid_argument("--index out of range");
      IntegratorSettings settings{flow_step};
      const auto start = parse_vector(flow_start);
      json out{{"endpoint",
                flow(family, flow_index - 1, flow_time, start, settings)}};
      if (flow_jacobian) {
        DDiffeo g{{{flow_index - 1, flow_time}}};
        out["jacobian"] = pushforward(family, g, start, settings);
      }
      emit(out, output_path);
    } else if (*orbit_cmd) {
      const auto family = family_from_json(read_json_file(orbit_vf));
      const auto point = parse_vector(orbit_point);
      if (orbit_depth > 0) {
        const auto span = bracket_span_rank(family, point, orbit_depth);
        emit(json{{"rank", span.rank},
                  {"singular_values", span.singular_values},
                  {"generators", json::array()}},
             output_path);
      } else {
        emit(to_json(distribution_rank(family, point, orbit_budget, orbit_seed)),
             output_path);
      }
    } else if (*ode_cmd) {
      const auto family = family_from_json(read_json_file(ode_vf));
      const auto path = path_from_json(read_json_file(ode_path));
      std::vector<double> start(family.dim, 0.0);
      if (int N = 0, n = 0; is_signature_ode_family(family, &N, &n))
        start = flatten_tensor(tensor_identity(n, N));
      if (!ode_start.empty()) start = parse_vector(ode_start);
      emit(to_json(solve_ode(family, path, start, ode_substeps)), output_path);
    } else if (*rde_cmd) {
      const auto family = family_from_json(read_json_file(rde_vf));
      const auto driver = rough_path_from_json(read_json_file(rde_rough));
      std::vector<double> start(family.dim, 0.0);
      if (int N = 0, n = 0; is_signature_ode_family(family, &N, &n))
        start = flatten_tensor(tensor_identity(n, N));
      if (!rde_start.empty()) start = parse_vector(rde_start);
      emit(to_json(solve_rde(family, driver, start, rde_substeps)), output_path);
    } else if (*reach_cmd) {
      const auto family = family_from_json(read_json_file(reach_vf));
      std::vector<double> start(family.dim, 0.0);
      if (int N = 0, n = 0; is_signature_ode_family(family, &N, &n))
        start = flatten_tensor(tensor_identity(n, N));
      if (!reach_start.empty()) start = parse_vector(reach_start);
      std::vector<double> target;
      if (!reach_target.empty()) {
        target = parse_vector(reach_target);
      } else if (!reach_rough.empty()) {
        const auto driver = rough_path_from_json(read_json_file(reach_rough));
        target = solve_rde(family, driver, start).terminal();
      } else {
        throw std::invalid_argument("reach needs --target or --rough");
      }
      ShootingSettings settings;
      settings.segments = reach_segments;
      settings.tol = reach_tol;
      settings.restarts = reach_restarts;
      settings.seed = reach_seed;
      const auto report = reach_shooting(family, start, target, reach_horizon, settings);
      json out = to_json(report);
      out["realized_path"] = to_json(realize(report.control, family.inputs));
      emit(out, output_path);
      return report.status == ReachStatus::Failed ? 2 : 0;
    } else if (*verify_cmd) {
      const auto family = family_from_json(read_json_file(verify_vf));
      const auto driver = rough_path_from_json(read_json_file(verify_rough));
      std::vector<double> start(family.dim, 0.0);
      if (int N = 0, n = 0; is_signature_ode_family(family, &N, &n))
        start = flatten_tensor(tensor_identity(n, N));
      if (!verify_start.empty()) start = parse_vector(verify_start);
      VerifySettings settings;
      settings.tol = verify_tol;
      settings.seed = verify_seed;
      settings.shooting.segments = verify_segments;
      settings.shooting.restarts = verify_restarts;
      const auto report =
          verify_accessibility(family, start, driver, verify_horizon, settings);
      json out = to_json(report);
      out["realized_path"] = to_json(realize(report.reach.control, family.inputs));
      emit(out, output_path);
      return report.reach.status == ReachStatus::Failed ? 2 : 0;
    }
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
