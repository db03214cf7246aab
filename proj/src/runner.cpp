#include "nsteady/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "nsteady/asymptotics.hpp"
#include "nsteady/evolution.hpp"
#include "nsteady/lorentz.hpp"
#include "nsteady/snapshot.hpp"
#include "nsteady/spectral.hpp"

namespace nsteady {

namespace {

using nlohmann::json;

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Guard violations raised by the analysis stage keep their library exception
// types; this tag is how the driver tells them apart from preconditions.
struct AnalysisGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

class StageTimer {
 public:
  void start(const std::string& name) {
    name_ = name;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop() {
    const auto dt = std::chrono::steady_clock::now() - t0_;
    times_[name_] =
        std::chrono::duration_cast<std::chrono::duration<double>>(dt).count();
  }
  json to_json() const { return times_; }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point t0_;
  std::map<std::string, double> times_;
};

json norm_json(const NormReport& r) { return json::parse(r.to_json_line()); }

json fit_json(const DecayFit& f) { return json::parse(decay_fit_to_json(f)); }

json momentum_json(const MomentumMatrix& M) {
  json rows = json::array();
  for (int h = 0; h < 3; ++h) rows.push_back({M.m[h][0], M.m[h][1], M.m[h][2]});
  return rows;
}

SpectralVectorField build_perturbation(const PerturbationSpec& p, const Grid& g) {
  if (p.kind == "gaussian_swirl")
    return gaussian_swirl(g, p.amplitude, p.width, p.axis);
  if (p.kind == "power_swirl")
    return power_swirl(g, p.amplitude, p.decay, p.axis);
  return SpectralVectorField(g);
}

struct RunContext {
  RunConfig cfg;
  Grid grid{};
  std::filesystem::path out_dir;
  json manifest;
  std::vector<std::string> artifacts;
  StageTimer timer;

  std::string save(const std::string& name, const SpectralVectorField& F) {
    const std::string path = (out_dir / name).string();
    write_snapshot(path, F);
    artifacts.push_back(name);
    return path;
  }
  void save_text(const std::string& name, const std::string& text) {
    std::ofstream out(out_dir / name, std::ios::binary);
    out << text;
    artifacts.push_back(name);
  }
};

// amplitude = 0 means "no force": build_force rejects it, but the zero run is
// a useful smoke case and has a well-defined answer (U = 0 everywhere).
SpectralVectorField make_force(const RunConfig& cfg, const Grid& g) {
  if (cfg.force.amplitude == 0.0) return SpectralVectorField(g);
  return transform(build_force(cfg.force, g));
}

struct SteadyStage {
  SpectralVectorField f, U0, U;
  PicardTrace trace;
};

SteadyStage run_steady(RunContext& ctx) {
  SteadyStage s{SpectralVectorField(ctx.grid), SpectralVectorField(ctx.grid),
                SpectralVectorField(ctx.grid), {}};
  ctx.timer.start("force");
  s.f = make_force(ctx.cfg, ctx.grid);
  s.U0 = compute_U0(s.f);
  ctx.timer.stop();

  ctx.timer.start("picard");
  PicardResult res = picard_solve(s.U0, ctx.cfg.solver);
  ctx.timer.stop();
  s.U = std::move(res.U);
  s.trace = std::move(res.trace);
  if (!s.trace.converged)
    throw SolverFailure(s.trace.aborted_growth
                            ? "picard aborted: iterates left the contraction regime"
                            : "picard did not converge within max_iters");

  const SteadyResidual resd = steady_residual(s.U, s.U0);
  ctx.manifest["picard"] = {{"iterations", s.trace.iterations},
                            {"converged", s.trace.converged},
                            {"residual_weak3_rel", resd.weak3_rel},
                            {"residual_l2_rel", resd.l2_rel}};
  ctx.save("force.nsf1", s.f);
  ctx.save("solution.nsf1", s.U);
  ctx.save_text("picard_trace.csv", s.trace.to_csv());
  return s;
}

ShellStat stat_of(const std::string& s) {
  return s == "max" ? ShellStat::max : ShellStat::l2_mean;
}

void cmd_solve(RunContext& ctx) { run_steady(ctx); }

void cmd_norms(RunContext& ctx) {
  SteadyStage s = run_steady(ctx);
  std::vector<double> ps = ctx.cfg.analysis.p_list;
  if (ps.empty()) ps = {2.0, 3.0, 4.0, 6.0};

  ctx.timer.start("norms");
  std::vector<LpSweepEntry> sweep = lp_norm_sweep(s.U, s.U0, ps);
  ctx.timer.stop();

  std::ostringstream lines;
  json table = json::array();
  for (const auto& e : sweep) {
    for (const NormReport* r :
         {&e.solution_lp, &e.solution_weak, &e.data_lp, &e.data_weak})
      lines << r->to_json_line() << '\n';
    table.push_back({{"p", e.p},
                     {"solution_lp", norm_json(e.solution_lp)},
                     {"solution_weak", norm_json(e.solution_weak)},
                     {"data_lp", norm_json(e.data_lp)},
                     {"data_weak", norm_json(e.data_weak)}});
  }
  ctx.save_text("norms.jsonl", lines.str());
  ctx.manifest["norm_sweep"] = table;
}

void cmd_analyze(RunContext& ctx) {
  SteadyStage s = run_steady(ctx);
  const AnalysisSpec& a = ctx.cfg.analysis;
  const double L = ctx.grid.box_length;
  const double r_min = a.shell_r_min > 0.0 ? a.shell_r_min : L / 8.0;
  const double r_max = a.shell_r_max > 0.0 ? a.shell_r_max : L / 4.0;

  ctx.timer.start("analyze");
  try {
    const PhysicalVectorField Up = inverse_transform_real(s.U);
    json out;
    out["solution_decay"] = fit_json(shell_decay_fit(
        Up, r_min, r_max, a.shell_n, stat_of(a.shell_stat)));
    const MomentumMatrix M = momentum_matrix(Up);
    out["momentum_matrix"] = momentum_json(M);
    if (M.frobenius() > 0.0)
      out["anisotropy_deviation"] = anisotropy_deviation(M);
    if (a.profile_check) {
      const ProfileResidual pr =
          profile_residual(s.U, s.U0, M, r_min, r_max, a.shell_n,
                           stat_of(a.shell_stat));
      out["profile_residual_decay"] = fit_json(pr.fit);
    }
    ctx.manifest["analysis"] = out;
  } catch (const std::exception& e) {
    throw AnalysisGuard(e.what());
  }
  ctx.timer.stop();
}

void add_trajectory(RunContext& ctx, const Trajectory& traj) {
  ctx.save_text("trajectory.csv", traj.to_csv());
  json snaps = json::array();
  int i = 0;
  for (const auto& [t, snap] : traj.snapshots) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(3) << std::setfill('0') << i++ << ".nsf1";
    ctx.save(name.str(), snap);
    snaps.push_back({{"t", t}, {"file", name.str()}});
  }
  ctx.manifest["evolution"] = {{"samples", traj.series.size()},
                               {"aborted_blowup", traj.aborted_blowup},
                               {"aborted_cfl", traj.aborted_cfl},
                               {"final_t", traj.series.back().t},
                               {"final_weak3", traj.series.back().weak3},
                               {"final_l2", traj.series.back().l2},
                               {"snapshots", snaps}};
}

void cmd_evolve(RunContext& ctx) {
  if (!ctx.cfg.evolution)
    throw std::invalid_argument("evolve: config has no [evolution] section");
  SteadyStage s = run_steady(ctx);

  SpectralVectorField u0 = s.U;
  const SpectralVectorField w0 = build_perturbation(ctx.cfg.perturbation, ctx.grid);
  for (std::size_t i = 0; i < u0.data().size(); ++i) u0.data()[i] += w0.data()[i];

  ctx.timer.start("evolve");
  Trajectory traj = evolve(u0, s.f, *ctx.cfg.evolution, &s.U);
  ctx.timer.stop();
  add_trajectory(ctx, traj);

  if (!ctx.cfg.analysis.rate_q.empty()) {
    try {
      json fits = json::array();
      for (const RateFit& fit : stability_rates(traj, ctx.cfg.analysis.rate_q,
                                                ctx.cfg.analysis.rate_t0,
                                                ctx.cfg.analysis.rate_t1))
        fits.push_back({{"q", fit.q},
                        {"exponent", fit.exponent},
                        {"residual_rms", fit.residual_rms},
                        {"t_min", fit.t_min},
                        {"t_max", fit.t_max}});
      ctx.manifest["stability_rates"] = fits;
    } catch (const std::exception& e) {
      throw AnalysisGuard(e.what());
    }
  }
}

void cmd_experiment(RunContext& ctx, const std::string& name) {
  if (name == "large_data") {
    if (!ctx.cfg.evolution)
      throw std::invalid_argument("experiment: config has no [evolution] section");
    if (ctx.cfg.perturbation.kind == "none")
      throw std::invalid_argument(
          "experiment large_data: needs a [perturbation] bump for v0");
    ctx.timer.start("force");
    const SpectralVectorField f = make_force(ctx.cfg, ctx.grid);
    const SpectralVectorField v0 = build_perturbation(ctx.cfg.perturbation, ctx.grid);
    const SpectralVectorField w0(ctx.grid);
    ctx.timer.stop();

    ctx.timer.start("evolve");
    LargeDataReport rep = large_data_experiment(v0, w0, f, *ctx.cfg.evolution);
    ctx.timer.stop();
    add_trajectory(ctx, rep.trajectory);
    ctx.manifest["large_data"] = json::parse(rep.to_json());
    return;
  }

  if (name == "nonexistence") {
    const AnalysisSpec& a = ctx.cfg.analysis;
    const double L = ctx.grid.box_length;
    const double r_min = a.shell_r_min > 0.0 ? a.shell_r_min : L / 8.0;
    const double r_max = a.shell_r_max > 0.0 ? a.shell_r_max : L / 4.0;

    std::vector<AmplitudeSample> family;
    ctx.timer.start("family");
    for (double eta : {0.5, 1.0, 2.0}) {
      RunConfig scaled = ctx.cfg;
      scaled.force.amplitude *= eta;
      const SpectralVectorField f = make_force(scaled, ctx.grid);
      const SpectralVectorField U0 = compute_U0(f);
      PicardResult res = picard_solve(U0, ctx.cfg.solver);
      if (!res.trace.converged)
        throw SolverFailure("picard did not converge at amplitude scale " +
                            std::to_string(eta));
      family.push_back({eta, std::move(res.U), U0});
    }
    ctx.timer.stop();

    ctx.timer.start("diagnostic");
    try {
      NonexistenceReport rep =
          nonexistence_diagnostic(family, r_min, r_max, a.shell_n);
      ctx.manifest["nonexistence"] = json::parse(rep.to_json());
    } catch (const std::exception& e) {
      throw AnalysisGuard(e.what());
    }
    ctx.timer.stop();
    return;
  }

  throw std::invalid_argument("experiment: unknown name '" + name +
                              "' (available: large_data, nonexistence)");
}

}  // namespace

int run_subcommand(const std::string& subcommand, const std::string& config_path,
                   const RunOverrides& overrides, std::ostream& err) {
  RunContext ctx;
  try {
    ctx.cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return static_cast<int>(ExitCode::config_error);
  }
  if (overrides.output_dir) ctx.cfg.output_dir = *overrides.output_dir;
  if (overrides.seed) {
    ctx.cfg.seed = *overrides.seed;
  }
  if (ctx.cfg.seed != 0) ctx.cfg.force.seed = ctx.cfg.seed;
  std::string experiment = ctx.cfg.experiment;
  if (overrides.experiment) experiment = *overrides.experiment;

  try {
    validate_config(ctx.cfg);
    ctx.grid = ctx.cfg.make_run_grid();
    if (subcommand == "experiment" && experiment.empty())
      throw std::invalid_argument("experiment: no name given (positional or [run] experiment)");
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return static_cast<int>(ExitCode::precondition);
  }

  try {
    ctx.out_dir = ctx.cfg.output_dir;
    std::filesystem::create_directories(ctx.out_dir);

    ctx.manifest["format_version"] = 1;
    ctx.manifest["subcommand"] = subcommand;
    ctx.manifest["config"] = ctx.cfg.raw_text;
    ctx.manifest["grid"] = {{"n", ctx.cfg.grid_n}, {"box_length", ctx.cfg.box_length}};
    ctx.manifest["seed"] = ctx.cfg.force.seed;
    ctx.manifest["run_hash"] = hash_hex(fnv1a(
        subcommand + "\n" + experiment + "\n" +
        std::to_string(ctx.cfg.force.seed) + "\n" + ctx.cfg.raw_text));

    if (subcommand == "solve") cmd_solve(ctx);
    else if (subcommand == "norms") cmd_norms(ctx);
    else if (subcommand == "analyze") cmd_analyze(ctx);
    else if (subcommand == "evolve") cmd_evolve(ctx);
    else if (subcommand == "experiment") cmd_experiment(ctx, experiment);
    else {
      err << "unknown subcommand: " << subcommand << '\n';
      return static_cast<int>(ExitCode::usage);
    }

    ctx.manifest["artifacts"] = ctx.artifacts;
    std::ofstream mout(ctx.out_dir / "manifest.json", std::ios::binary);
    mout << ctx.manifest.dump(2) << '\n';
    std::ofstream tout(ctx.out_dir / "timings.json", std::ios::binary);
    tout << ctx.timer.to_json().dump(2) << '\n';
    return static_cast<int>(ExitCode::ok);
  } catch (const AnalysisGuard& e) {
    err << "analysis guard: " << e.what() << '\n';
    return static_cast<int>(ExitCode::analysis_guard);
  } catch (const SolverFailure& e) {
    err << "solver: " << e.what() << '\n';
    return static_cast<int>(ExitCode::solver_failure);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return static_cast<int>(ExitCode::precondition);
  }
}

}  // namespace nsteady
