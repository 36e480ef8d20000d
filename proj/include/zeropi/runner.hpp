#pragma once

#include <string>
#include <vector>

#include "zeropi/decoherence.hpp"
#include "zeropi/params.hpp"
#include "zeropi/spectrum.hpp"

namespace zeropi {

inline constexpr const char* kVersion = "0.1.0";

enum class Task { spectrum, sweep, dispersive, coherence, purcell, validate };

Task parse_task(const std::string& name);
std::string task_name(Task t);

/// One run's worth of settings.  Parsed from a flat `key = value` text file
/// whose keys carry their units (EJ_GHz, temperature_K, f_ir_Hz, ...);
/// unknown keys are rejected.
struct RunConfig {
  Task task = Task::spectrum;
  bool task_set = false;

  CircuitParams params;
  BasisSpec basis;

  // sweep block
  SweepParameter sweep_parameter = SweepParameter::flux;
  double sweep_start = 0.0;
  double sweep_stop = 0.5;
  int sweep_points = 21;
  bool sweep_3d = false;

  // level counts
  int levels = 5;     // 2d states / depolarization levels
  int states_3d = 0;  // 0 = heuristic from thermal coverage

  NoiseAmplitudes amplitudes;
  NoiseCutoffs cutoffs;
  bool include_charge = false;
  double zeta_coverage = 0.999;

  EigenOptions eigen;

  std::string out_dir = "out";
  bool write_csv = true;
  bool write_json = true;
  int workers = 1;

  std::vector<double> sweep_grid() const;
  void validate() const;  // throws DomainError
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig parse_config_text(const std::string& text, const std::string& source);
RunConfig parse_config_file(const std::string& path);

/// Executes the configured task and writes its artifacts into out_dir
/// (spectrum.csv / dispersive.csv / coherence.csv / purcell.csv plus
/// manifest.json).  Returns the process exit code: 0 success, 2 invalid
/// configuration, 3 convergence failure.  Messages go to the given stream.
int run(const RunConfig& config, std::ostream& log);

/// Writes gnuplot companion scripts next to the CSV outputs.
void write_gnuplot_scripts(const std::string& out_dir);

/// Fixed 12-significant-digit scientific formatting used for every numeric
/// CSV field, so outputs are byte-stable across runs and worker counts.
std::string format_number(double v);

}  // namespace zeropi
