#pragma once

#include <cstddef>
#include <optional>

#include "anovel/cli/config.hpp"
#include "anovel/cli/result_table.hpp"
#include "anovel/propagate.hpp"

namespace anovel::cli {

/// Command-line values that replace config entries before anything runs.
struct Overrides {
  std::optional<double> tol;
  std::optional<std::size_t> steps;
  std::optional<OutputFormat> format;
  std::optional<std::string> out;
};

/// Throws ValidationError for out-of-range values.
void apply_overrides(RunConfig& config, const Overrides& overrides);

PropagateOptions propagate_options(const IntegratorConfig& integrator, std::size_t samples,
                                   bool store_states = false);

/// Preset, explicit trajectory, or (with a scan block) a scan.
ResultTable run(const RunConfig& config);

/// One row per grid value, evaluated concurrently, in grid order. Per-point
/// failures set ok = 0, fill the row with NaN and are listed under "errors".
ResultTable scan(const RunConfig& config, std::size_t threads = 0);

nlohmann::ordered_json certificate_json(const ConvergenceCertificate& c);
nlohmann::ordered_json invariants_json(const InvariantReport& r);

/// config_hash, integrator and preset entries shared by every table.
void stamp_metadata(ResultTable& table, const RunConfig& config);

}  // namespace anovel::cli
