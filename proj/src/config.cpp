#include "zeropi/runner.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace zeropi {

Task parse_task(const std::string& name) {
  if (name == "spectrum") return Task::spectrum;
  if (name == "sweep") return Task::sweep;
  if (name == "dispersive") return Task::dispersive;
  if (name == "coherence") return Task::coherence;
  if (name == "purcell") return Task::purcell;
  if (name == "validate") return Task::validate;
  throw ConfigError("unknown task '" + name + "'");
}

std::string task_name(Task t) {
  switch (t) {
    case Task::spectrum: return "spectrum";
    case Task::sweep: return "sweep";
    case Task::dispersive: return "dispersive";
    case Task::coherence: return "coherence";
    case Task::purcell: return "purcell";
    case Task::validate: return "validate";
  }
  return "?";
}

std::vector<double> RunConfig::sweep_grid() const {
  std::vector<double> grid(sweep_points);
  for (int i = 0; i < sweep_points; ++i)
    grid[i] = sweep_start +
              (sweep_stop - sweep_start) * i / std::max(1, sweep_points - 1);
  return grid;
}

void RunConfig::validate() const {
  params.validate();
  default_basis(params, basis).validate();
  if (levels < 2) throw DomainError("levels", "must be >= 2");
  if (states_3d < 0) throw DomainError("states_3d", "must be >= 0");
  if (workers < 1) throw DomainError("workers", "must be >= 1");
  if (!(zeta_coverage > 0.0 && zeta_coverage < 1.0))
    throw DomainError("zeta_coverage", "must be in (0, 1)");
  if (task == Task::sweep) {
    if (sweep_points < 2) throw DomainError("sweep_points", "must be >= 2");
    if (!(sweep_stop > sweep_start))
      throw DomainError("sweep_stop", "must exceed sweep_start");
  }
  if (!(cutoffs.omega_ir > 0.0) || !(cutoffs.omega_uv > cutoffs.omega_ir))
    throw DomainError("f_ir_Hz", "requires 0 < f_ir < f_uv");
  if (!(cutoffs.t_meas > 0.0)) throw DomainError("t_meas_s", "must be > 0");
  if (!write_csv && !write_json)
    throw DomainError("formats", "must include csv or json");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': not a boolean: '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": empty key or value");
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    seen.push_back(key);

    if (key == "task") {
      cfg.task = parse_task(val);
      cfg.task_set = true;
    } else if (key == "EC_GHz") {
      cfg.params.EC = to_double(key, val);
    } else if (key == "ECJ_GHz") {
      cfg.params.ECJ = to_double(key, val);
    } else if (key == "EJ_GHz") {
      cfg.params.EJ = to_double(key, val);
    } else if (key == "EL_GHz") {
      cfg.params.EL = to_double(key, val);
    } else if (key == "dC") {
      cfg.params.dC = to_double(key, val);
    } else if (key == "dCJ") {
      cfg.params.dCJ = to_double(key, val);
    } else if (key == "dEJ") {
      cfg.params.dEJ = to_double(key, val);
    } else if (key == "dEL") {
      cfg.params.dEL = to_double(key, val);
    } else if (key == "flux_Phi0") {
      cfg.params.flux = to_double(key, val);
    } else if (key == "ng_theta") {
      cfg.params.ng_theta = to_double(key, val);
    } else if (key == "temperature_K") {
      cfg.params.temperature = to_double(key, val);
    } else if (key == "kappa_zeta_per_s") {
      cfg.params.kappa_zeta = to_double(key, val);
    } else if (key == "M_Phi0_per_A") {
      cfg.params.fluxline.M = to_double(key, val);
    } else if (key == "R_ohm") {
      cfg.params.fluxline.R = to_double(key, val);
    } else if (key == "n_theta_max") {
      cfg.basis.n_theta_max = to_int(key, val);
    } else if (key == "phi_points") {
      cfg.basis.phi_points = to_int(key, val);
    } else if (key == "phi_max") {
      cfg.basis.phi_max = to_double(key, val);
    } else if (key == "n_zeta_max") {
      cfg.basis.n_zeta_max = to_int(key, val);
    } else if (key == "sweep_parameter") {
      cfg.sweep_parameter = parse_sweep_parameter(val);
    } else if (key == "sweep_start") {
      cfg.sweep_start = to_double(key, val);
    } else if (key == "sweep_stop") {
      cfg.sweep_stop = to_double(key, val);
    } else if (key == "sweep_points") {
      cfg.sweep_points = to_int(key, val);
    } else if (key == "sweep_3d") {
      cfg.sweep_3d = to_bool(key, val);
    } else if (key == "levels") {
      cfg.levels = to_int(key, val);
    } else if (key == "states_3d") {
      cfg.states_3d = to_int(key, val);
    } else if (key == "A_flux_Phi0") {
      cfg.amplitudes.A_flux = to_double(key, val);
    } else if (key == "A_charge_e") {
      cfg.amplitudes.A_charge = to_double(key, val);
    } else if (key == "A_Ic_rel") {
      cfg.amplitudes.A_Ic = to_double(key, val);
    } else if (key == "f_ir_Hz") {
      cfg.cutoffs.omega_ir = constants::two_pi * to_double(key, val);
    } else if (key == "f_uv_Hz") {
      cfg.cutoffs.omega_uv = constants::two_pi * to_double(key, val);
    } else if (key == "t_meas_s") {
      cfg.cutoffs.t_meas = to_double(key, val);
    } else if (key == "include_charge") {
      cfg.include_charge = to_bool(key, val);
    } else if (key == "zeta_coverage") {
      cfg.zeta_coverage = to_double(key, val);
    } else if (key == "eigen_tol") {
      cfg.eigen.tol = to_double(key, val);
    } else if (key == "eigen_seed") {
      cfg.eigen.seed = static_cast<unsigned long long>(to_double(key, val));
    } else if (key == "eigen_max_basis") {
      cfg.eigen.max_basis = to_int(key, val);
    } else if (key == "eigen_max_restarts") {
      cfg.eigen.max_restarts = to_int(key, val);
    } else if (key == "eigen_dense_threshold") {
      cfg.eigen.dense_threshold = to_int(key, val);
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else if (key == "formats") {
      cfg.write_csv = false;
      cfg.write_json = false;
      std::istringstream fs(val);
      std::string f;
      while (std::getline(fs, f, ',')) {
        f = trim(f);
        if (f == "csv")
          cfg.write_csv = true;
        else if (f == "json")
          cfg.write_json = true;
        else
          throw ConfigError("key 'formats': unknown format '" + f + "'");
      }
    } else if (key == "workers") {
      cfg.workers = to_int(key, val);
    } else {
      throw ConfigError(source + ":" + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace zeropi
