#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "anovel/cli/config.hpp"
#include "anovel/cli/result_table.hpp"
#include "anovel/ensemble.hpp"
#include "anovel/schedule.hpp"
#include "anovel/system.hpp"

namespace anovel::cli {

/// One number a preset fixes, with where it comes from.
struct PresetPin {
  std::string key;
  std::string value;
  std::string source;
};

struct PresetInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> columns;
  std::vector<PresetPin> pins;
};

const std::vector<PresetInfo>& presets();
bool is_preset(const std::string& name);

/// Runs a named preset; metadata is stamped by the caller.
ResultTable run_preset(const std::string& name, const IntegratorConfig& integrator);

/// Building blocks shared with the tests.
namespace pinned {
/// The four-proton cloud (first k members) with its chosen dipolar couplings.
SystemSpec cloud(std::size_t k);
/// Cloud sweep and the conventional lock of equal length.
SweepSchedule cloud_sweep();
SweepSchedule cloud_lock();
/// Single-proton sweep used for the crossing-shift study.
SystemSpec shift_system(double C_rel, double delta_rel);
SweepSchedule shift_sweep(SweepDirection direction = SweepDirection::HighToLow);
/// Repetition model for one bulk leak rate and transfer efficiency.
RepetitionModel repetition(double gamma_1bulk, double efficiency);
SweepSchedule ahp();
inline constexpr std::size_t kRepetitionRounds = 200;
}  // namespace pinned

std::string presets_text();
std::string presets_markdown();

}  // namespace anovel::cli
