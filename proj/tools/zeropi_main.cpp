#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zeropi/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"0-pi qubit spectrum and coherence calculator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("zeropi ") + zeropi::kVersion);

  std::string config_path;
  std::string out_dir;
  int workers = 0;

  auto add_task = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--workers", workers, "worker threads for sweeps");
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    return sub;
  };

  add_task("spectrum", "eigenvalues and dressed-state labels at one point");
  add_task("sweep", "eigenvalues along a parameter grid");
  add_task("dispersive", "zeta-mode couplings and dispersive shifts");
  add_task("coherence", "full dephasing and depolarization budget");
  add_task("purcell", "exact vs perturbative Purcell rates");
  add_task("validate", "convergence and consistency checks");

  CLI::App* gnuplot = app.add_subcommand("gnuplot", "emit companion plot scripts");
  std::string gnuplot_dir = "out";
  gnuplot->add_option("--out", gnuplot_dir, "directory holding the CSV outputs");

  CLI11_PARSE(app, argc, argv);

  const CLI::App* sub = app.get_subcommands().front();
  if (sub->get_name() == "gnuplot") {
    try {
      zeropi::write_gnuplot_scripts(gnuplot_dir);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 3;
    }
    return 0;
  }

  zeropi::RunConfig config;
  try {
    config = zeropi::parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
  const zeropi::Task cli_task = zeropi::parse_task(sub->get_name());
  if (config.task_set && config.task != cli_task) {
    std::cerr << "configuration error: config requests task '"
              << zeropi::task_name(config.task) << "' but the command line says '"
              << zeropi::task_name(cli_task) << "'\n";
    return 2;
  }
  config.task = cli_task;
  if (workers > 0) config.workers = workers;
  if (!out_dir.empty()) config.out_dir = out_dir;

  return zeropi::run(config, std::cout);
}
