#include "nsteady/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace nsteady {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + v);
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: bad boolean for '" + key + "': " + v);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: empty list entry in '" + key + "'");
    out.push_back(parse_double(key, item));
  }
  return out;
}

std::array<double, 3> parse_vec3(const std::string& key, const std::string& v) {
  const std::vector<double> list = parse_list(key, v);
  if (list.size() != 3)
    throw ConfigError("config: '" + key + "' needs exactly 3 components");
  return {list[0], list[1], list[2]};
}

ForceKind parse_force_kind(const std::string& v) {
  if (v == "regularized_dirac") return ForceKind::regularized_dirac;
  if (v == "fourier_annulus") return ForceKind::fourier_annulus;
  if (v == "symmetric_annulus") return ForceKind::symmetric_annulus;
  if (v == "wave_packet") return ForceKind::wave_packet;
  if (v == "custom_snapshot") return ForceKind::custom_snapshot;
  throw ConfigError("config: unknown force kind: " + v);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  cfg.raw_text = text;
  bool has_evolution = false;
  EvolutionConfig evo;

  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "grid" && section != "force" && section != "solver" &&
          section != "evolution" && section != "perturbation" &&
          section != "analysis" && section != "run")
        throw ConfigError("config: unknown section [" + section + "]");
      if (section == "evolution") has_evolution = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside any section");

    auto unknown = [&]() -> ConfigError {
      return ConfigError("config: unknown key '" + key + "' in [" + section + "]");
    };

    if (section == "grid") {
      if (key == "n") cfg.grid_n = static_cast<int>(parse_int(key, value));
      else if (key == "box_length") cfg.box_length = parse_double(key, value);
      else throw unknown();
    } else if (section == "force") {
      if (key == "kind") cfg.force.kind = parse_force_kind(value);
      else if (key == "amplitude") cfg.force.amplitude = parse_double(key, value);
      else if (key == "k_min") cfg.force.k_min = parse_double(key, value);
      else if (key == "k_max") cfg.force.k_max = parse_double(key, value);
      else if (key == "seed") cfg.force.seed = static_cast<std::uint64_t>(parse_int(key, value));
      else if (key == "width") cfg.force.width = parse_double(key, value);
      else if (key == "envelope_width") cfg.force.envelope_width = parse_double(key, value);
      else if (key == "direction") cfg.force.direction = parse_vec3(key, value);
      else if (key == "snapshot_path") cfg.force.snapshot_path = value;
      else throw unknown();
    } else if (section == "solver") {
      if (key == "max_iters") cfg.solver.max_iters = static_cast<int>(parse_int(key, value));
      else if (key == "tol_rel") cfg.solver.tol_rel = parse_double(key, value);
      else if (key == "safeguard") cfg.solver.safeguard = parse_bool(key, value);
      else if (key == "growth_factor") cfg.solver.growth_factor = parse_double(key, value);
      else throw unknown();
    } else if (section == "evolution") {
      if (key == "dt") evo.dt = parse_double(key, value);
      else if (key == "t_final") evo.t_final = parse_double(key, value);
      else if (key == "scheme") {
        if (value == "rk2") evo.scheme = TimeScheme::rk2;
        else if (value == "rk4") evo.scheme = TimeScheme::rk4;
        else throw ConfigError("config: unknown scheme: " + value);
      } else if (key == "snapshot_times") evo.snapshot_times = parse_list(key, value);
      else if (key == "cfl_safety") evo.cfl_safety = parse_double(key, value);
      else if (key == "q_norms") evo.q_norms = parse_list(key, value);
      else if (key == "norm_stride") evo.norm_stride = static_cast<int>(parse_int(key, value));
      else if (key == "nonlinear") evo.nonlinear = parse_bool(key, value);
      else throw unknown();
    } else if (section == "perturbation") {
      if (key == "kind") {
        if (value != "none" && value != "gaussian_swirl" && value != "power_swirl")
          throw ConfigError("config: unknown perturbation kind: " + value);
        cfg.perturbation.kind = value;
      } else if (key == "amplitude") cfg.perturbation.amplitude = parse_double(key, value);
      else if (key == "width") cfg.perturbation.width = parse_double(key, value);
      else if (key == "decay") cfg.perturbation.decay = parse_double(key, value);
      else if (key == "axis") cfg.perturbation.axis = parse_vec3(key, value);
      else throw unknown();
    } else if (section == "analysis") {
      if (key == "p_list") cfg.analysis.p_list = parse_list(key, value);
      else if (key == "shell_r_min") cfg.analysis.shell_r_min = parse_double(key, value);
      else if (key == "shell_r_max") cfg.analysis.shell_r_max = parse_double(key, value);
      else if (key == "shell_n") cfg.analysis.shell_n = static_cast<int>(parse_int(key, value));
      else if (key == "shell_stat") {
        if (value != "max" && value != "l2_mean")
          throw ConfigError("config: unknown shell stat: " + value);
        cfg.analysis.shell_stat = value;
      } else if (key == "profile_check") cfg.analysis.profile_check = parse_bool(key, value);
      else if (key == "rate_t0") cfg.analysis.rate_t0 = parse_double(key, value);
      else if (key == "rate_t1") cfg.analysis.rate_t1 = parse_double(key, value);
      else if (key == "rate_q") cfg.analysis.rate_q = parse_list(key, value);
      else throw unknown();
    } else {  // run
      if (key == "output_dir") cfg.output_dir = value;
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
      else if (key == "experiment") cfg.experiment = value;
      else throw unknown();
    }
  }

  if (has_evolution) cfg.evolution = evo;
  if (cfg.grid_n == 0) throw ConfigError("config: missing [grid] n");
  if (cfg.box_length <= 0.0) throw ConfigError("config: missing [grid] box_length");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const RunConfig& cfg) {
  if (cfg.grid_n < 8 || cfg.grid_n % 2 != 0)
    throw std::invalid_argument("config: grid n must be even and >= 8");
  const Grid g = make_grid(cfg.grid_n, cfg.box_length);

  const ForceKind k = cfg.force.kind;
  if (k == ForceKind::fourier_annulus || k == ForceKind::symmetric_annulus ||
      k == ForceKind::wave_packet) {
    if (!(cfg.force.k_min >= 0.0) || !(cfg.force.k_max > cfg.force.k_min))
      throw std::invalid_argument("config: force band needs 0 <= k_min < k_max");
    if (cfg.force.k_max > g.dealias_wavenumber())
      throw std::invalid_argument(
          "config: force band extends past the dealias sphere");
  }
  if (k == ForceKind::regularized_dirac && cfg.force.width < 2.0 * g.spacing())
    throw std::invalid_argument("config: dirac width must resolve >= 2 cells");
  if (k == ForceKind::custom_snapshot && cfg.force.snapshot_path.empty())
    throw std::invalid_argument("config: custom_snapshot needs snapshot_path");

  if (cfg.solver.max_iters < 1)
    throw std::invalid_argument("config: solver max_iters must be >= 1");
  if (!(cfg.solver.tol_rel > 0.0))
    throw std::invalid_argument("config: solver tol_rel must be positive");

  if (cfg.evolution) {
    if (!(cfg.evolution->dt > 0.0))
      throw std::invalid_argument("config: evolution dt must be positive");
    if (cfg.evolution->t_final < 0.0)
      throw std::invalid_argument("config: evolution t_final must be >= 0");
  }
  if (cfg.perturbation.kind != "none" && !(cfg.perturbation.amplitude > 0.0))
    throw std::invalid_argument("config: perturbation amplitude must be positive");
  if (!cfg.analysis.rate_q.empty() &&
      !(cfg.analysis.rate_t1 > cfg.analysis.rate_t0 && cfg.analysis.rate_t0 > 0.0))
    throw std::invalid_argument("config: rate fit window needs 0 < rate_t0 < rate_t1");
}

}  // namespace nsteady
