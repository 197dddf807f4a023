// anovel: run presets, single trajectories and parameter scans from JSON configs.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "anovel/cli/config.hpp"
#include "anovel/cli/presets.hpp"
#include "anovel/cli/result_table.hpp"
#include "anovel/cli/runner.hpp"
#include "anovel/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

struct Options {
  std::string config_path;
  std::string preset;
  std::string out;
  std::string format;
  std::optional<double> tol;
  std::optional<std::size_t> steps;
};

anovel::cli::RunConfig load(const Options& o) {
  using namespace anovel::cli;
  RunConfig config;
  if (!o.config_path.empty() && !o.preset.empty()) {
    throw anovel::ValidationError("--preset", "cannot be combined with --config");
  }
  if (!o.config_path.empty()) {
    config = load_config(o.config_path);
  } else if (!o.preset.empty()) {
    if (!is_preset(o.preset)) throw anovel::ValidationError("--preset", "unknown preset '" + o.preset + "'");
    config.preset = o.preset;
  } else {
    throw anovel::ValidationError("--config", "a config file or --preset is required");
  }
  Overrides ov;
  ov.tol = o.tol;
  ov.steps = o.steps;
  if (!o.format.empty()) ov.format = parse_format(o.format);
  if (!o.out.empty()) ov.out = o.out;
  apply_overrides(config, ov);
  return config;
}

void emit(const anovel::cli::ResultTable& table, const anovel::cli::RunConfig& config) {
  if (config.output.path) {
    std::ofstream file(*config.output.path);
    if (!file) throw std::runtime_error("cannot write " + *config.output.path);
    anovel::cli::write_table(table, config.output.format, file);
  } else {
    anovel::cli::write_table(table, config.output.format, std::cout);
  }
}

void add_run_options(CLI::App* cmd, Options& o, bool allow_preset) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  if (allow_preset) cmd->add_option("--preset", o.preset, "run a named preset without a config file");
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--tol", o.tol, "step-doubling tolerance");
  cmd->add_option("--steps", o.steps, "initial step count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic spin-locking DNP simulator"};
  app.require_subcommand(1);

  Options run_opts, scan_opts, validate_opts;
  std::string list_format = "text";

  auto* run_cmd = app.add_subcommand("run", "run a preset or a config and write the result table");
  add_run_options(run_cmd, run_opts, true);
  auto* scan_cmd = app.add_subcommand("scan", "evaluate a config's scan grid");
  add_run_options(scan_cmd, scan_opts, false);
  auto* validate_cmd = app.add_subcommand("validate", "check a config file without running it");
  validate_cmd->add_option("--config", validate_opts.config_path, "JSON config file")->required();
  auto* presets_cmd = app.add_subcommand("presets", "preset catalogue");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "list presets");
  list_cmd->add_option("--format", list_format, "text or md")->check(CLI::IsMember({"text", "md"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run_cmd) {
      const auto config = load(run_opts);
      emit(anovel::cli::run(config), config);
    } else if (*scan_cmd) {
      const auto config = load(scan_opts);
      emit(anovel::cli::scan(config), config);
    } else if (*validate_cmd) {
      const auto config = anovel::cli::load_config(validate_opts.config_path);
      std::cout << "ok " << anovel::cli::config_hash(config) << "\n";
    } else if (*list_cmd) {
      std::cout << (list_format == "md" ? anovel::cli::presets_markdown() : anovel::cli::presets_text());
    }
  } catch (const anovel::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const anovel::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOk;
}
