#include "anovel/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "anovel/cli/presets.hpp"
#include "anovel/errors.hpp"

namespace anovel::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ValidationError(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ValidationError(path, "must be finite");
  return v;
}

std::size_t as_count(const json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ValidationError(path, "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw ValidationError(path, "expected a string");
  return value.get<std::string>();
}

// Tracks which keys of one JSON object were consumed so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] std::string at(const std::string& key) const { return join(path_, key); }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) throw ValidationError(at(key), "required");
    return *v;
  }

  double number(const std::string& key) { return as_number(require(key), at(key)); }

  std::optional<double> optional_number(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    return as_number(*v, at(key));
  }

  double positive(const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) throw ValidationError(at(key), "must be positive");
    return v;
  }

  std::optional<std::string> optional_string(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    return as_string(*v, at(key));
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!used_.contains(key)) throw ValidationError(at(key), "unknown key");
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> used_;
};

PositionConfig parse_position(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  PositionConfig p;
  p.r_m = r.positive("r_m");
  p.theta = r.number("theta");
  p.varphi = r.optional_number("varphi").value_or(0.0);
  r.finish();
  return p;
}

NucleusConfig parse_nucleus(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  NucleusConfig n;
  n.label = r.optional_string("label").value_or("");
  n.a_mhz = r.optional_number("a_mhz");
  n.c_mhz = r.optional_number("c_mhz");
  n.phi_hf = r.optional_number("phi_hf").value_or(0.0);
  if (const json* p = r.find("position")) n.position = parse_position(*p, r.at("position"));
  n.fermi_contact_mhz = r.optional_number("fermi_contact_mhz").value_or(0.0);
  r.finish();
  if (!n.position && !(n.a_mhz && n.c_mhz)) {
    throw ValidationError(path, "needs a_mhz and c_mhz, or a position");
  }
  if (n.a_mhz.has_value() != n.c_mhz.has_value()) {
    throw ValidationError(path, "a_mhz and c_mhz must be given together");
  }
  if (n.phi_hf < 0.0 || n.phi_hf >= kTwoPi) throw ValidationError(join(path, "phi_hf"), "must lie in [0, 2pi)");
  return n;
}

SystemConfig parse_system(const json& j) {
  ObjectReader r(j, "system");
  SystemConfig s;
  s.omega_0n_mhz = r.optional_number("omega_0n_mhz");
  s.delta_omega0_mhz = r.optional_number("delta_omega0_mhz").value_or(0.0);
  s.b0_t = r.optional_number("b0_t");
  s.temperature_k = r.optional_number("temperature_k");
  if (s.omega_0n_mhz && !(*s.omega_0n_mhz > 0.0)) throw ValidationError(r.at("omega_0n_mhz"), "must be positive");
  if (s.b0_t && !(*s.b0_t > 0.0)) throw ValidationError(r.at("b0_t"), "must be positive");
  if (s.temperature_k && !(*s.temperature_k > 0.0)) throw ValidationError(r.at("temperature_k"), "must be positive");
  if (!s.omega_0n_mhz && !s.b0_t) throw ValidationError(r.at("omega_0n_mhz"), "required unless b0_t is given");

  if (const json* nuclei = r.find("nuclei")) {
    if (!nuclei->is_array()) throw ValidationError(r.at("nuclei"), "expected an array");
    for (std::size_t i = 0; i < nuclei->size(); ++i) {
      s.nuclei.push_back(parse_nucleus((*nuclei)[i], index_path(r.at("nuclei"), i)));
    }
  }
  if (s.nuclei.size() > kMaxNuclei) {
    throw ValidationError(r.at("nuclei"), "at most " + std::to_string(kMaxNuclei) + " nuclei supported");
  }

  if (const json* d = r.find("dipolar_mhz")) {
    const std::string path = r.at("dipolar_mhz");
    if (!d->is_array() || d->size() != s.nuclei.size()) throw ValidationError(path, "expected a k x k array");
    std::vector<std::vector<double>> m;
    for (std::size_t i = 0; i < d->size(); ++i) {
      const json& row = (*d)[i];
      if (!row.is_array() || row.size() != s.nuclei.size()) {
        throw ValidationError(index_path(path, i), "expected a row of length k");
      }
      std::vector<double> values;
      for (std::size_t c = 0; c < row.size(); ++c) {
        values.push_back(as_number(row[c], index_path(index_path(path, i), c)));
      }
      m.push_back(std::move(values));
    }
    s.dipolar_mhz = std::move(m);
  }
  if (const json* g = r.find("dipolar_from_geometry")) {
    if (!g->is_boolean()) throw ValidationError(r.at("dipolar_from_geometry"), "expected a boolean");
    s.dipolar_from_geometry = g->get<bool>();
  }
  if (s.dipolar_from_geometry && s.dipolar_mhz) {
    throw ValidationError(r.at("dipolar_from_geometry"), "cannot be combined with dipolar_mhz");
  }
  if (s.dipolar_from_geometry) {
    for (std::size_t i = 0; i < s.nuclei.size(); ++i) {
      if (!s.nuclei[i].position) {
        throw ValidationError(index_path(r.at("nuclei"), i) + ".position", "required by dipolar_from_geometry");
      }
    }
  }
  r.finish();
  return s;
}

ScheduleConfig parse_schedule(const json& j) {
  ObjectReader r(j, "schedule");
  ScheduleConfig s;
  const std::string kind = as_string(r.require("kind"), r.at("kind"));
  if (kind == "constant") {
    s.kind = ScheduleKind::ConstantLock;
    s.omega_1e_mhz = r.number("omega_1e_mhz");
    if (s.omega_1e_mhz < 0.0) throw ValidationError(r.at("omega_1e_mhz"), "must be non-negative");
    s.t_total_s = r.positive("t_total_s");
    s.detuning_mhz = r.optional_number("detuning_mhz").value_or(0.0);
  } else if (kind == "linear") {
    s.kind = ScheduleKind::LinearSweep;
    s.delta_omega_mhz = r.positive("delta_omega_mhz");
    s.t_sweep_s = r.positive("t_sweep_s");
    if (auto dir = r.optional_string("direction")) {
      if (*dir == "high_to_low") {
        s.direction = SweepDirection::HighToLow;
      } else if (*dir == "low_to_high") {
        s.direction = SweepDirection::LowToHigh;
      } else {
        throw ValidationError(r.at("direction"), "expected high_to_low or low_to_high");
      }
    }
  } else if (kind == "ahp") {
    s.kind = ScheduleKind::AHP;
    s.omega_1max_mhz = r.positive("omega_1max_mhz");
    s.alpha_mhz = r.positive("alpha_mhz");
    s.t_s_s = r.positive("t_s_s");
    s.scale = r.optional_number("scale").value_or(1.0);
    if (!(s.scale > 0.0)) throw ValidationError(r.at("scale"), "must be positive");
  } else {
    throw ValidationError(r.at("kind"), "expected constant, linear or ahp");
  }
  if (auto axis = r.optional_string("initial")) {
    if (*axis == "x") {
      s.initial = ElectronAxis::X;
    } else if (*axis == "z") {
      s.initial = ElectronAxis::Z;
    } else {
      throw ValidationError(r.at("initial"), "expected x or z");
    }
  }
  r.finish();
  return s;
}

ScanConfig parse_scan(const json& j) {
  ObjectReader r(j, "scan");
  ScanConfig s;
  s.parameter = as_string(r.require("parameter"), r.at("parameter"));
  const auto& names = scan_parameters();
  if (std::find(names.begin(), names.end(), s.parameter) == names.end()) {
    throw ValidationError(r.at("parameter"), "unknown scan parameter '" + s.parameter + "'");
  }
  if (const json* n = r.find("nucleus")) s.nucleus = as_count(*n, r.at("nucleus"));
  const json& grid = r.require("grid");
  if (!grid.is_array()) throw ValidationError(r.at("grid"), "expected an array");
  if (grid.empty()) throw ValidationError(r.at("grid"), "must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) s.grid.push_back(as_number(grid[i], index_path(r.at("grid"), i)));
  r.finish();
  return s;
}

OutputConfig parse_output(const json& j) {
  ObjectReader r(j, "output");
  OutputConfig o;
  if (auto f = r.optional_string("format")) {
    try {
      o.format = parse_format(*f);
    } catch (const ValidationError& e) {
      throw ValidationError(r.at("format"), "expected csv or json");
    }
  }
  o.path = r.optional_string("path");
  if (const json* s = r.find("stride")) {
    o.stride = as_count(*s, r.at("stride"));
    if (o.stride == 0) throw ValidationError(r.at("stride"), "must be at least 1");
  }
  r.finish();
  return o;
}

IntegratorConfig parse_integrator(const json& j) {
  ObjectReader r(j, "integrator");
  IntegratorConfig c;
  if (r.find("tol") != nullptr) c.tol = r.positive("tol");
  if (const json* s = r.find("steps")) {
    c.steps = as_count(*s, r.at("steps"));
    if (c.steps < 2) throw ValidationError(r.at("steps"), "must be at least 2");
  }
  if (const json* s = r.find("samples")) {
    c.samples = as_count(*s, r.at("samples"));
    if (c.samples < 2) throw ValidationError(r.at("samples"), "must be at least 2");
  }
  if (const json* s = r.find("max_refinements")) c.max_refinements = as_count(*s, r.at("max_refinements"));
  r.finish();
  return c;
}

bool schedule_uses(ScheduleKind kind, const std::string& parameter) {
  static const std::set<std::string> constant{"omega_1e_mhz", "t_total_s", "detuning_mhz"};
  static const std::set<std::string> linear{"delta_omega_mhz", "t_sweep_s"};
  static const std::set<std::string> ahp{"omega_1max_mhz", "alpha_mhz", "t_s_s", "scale"};
  switch (kind) {
    case ScheduleKind::ConstantLock: return constant.contains(parameter);
    case ScheduleKind::LinearSweep: return linear.contains(parameter);
    case ScheduleKind::AHP: return ahp.contains(parameter);
  }
  return false;
}

bool is_schedule_parameter(const std::string& parameter) {
  return schedule_uses(ScheduleKind::ConstantLock, parameter) ||
         schedule_uses(ScheduleKind::LinearSweep, parameter) || schedule_uses(ScheduleKind::AHP, parameter);
}

bool is_nucleus_parameter(const std::string& parameter) {
  return parameter == "a_mhz" || parameter == "c_mhz";
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

const std::vector<std::string>& scan_parameters() {
  static const std::vector<std::string> names{
      "a_mhz",          "c_mhz",       "delta_omega0_mhz", "omega_0n_mhz",   "delta_omega_mhz",
      "t_sweep_s",      "omega_1e_mhz", "t_total_s",       "detuning_mhz",   "omega_1max_mhz",
      "alpha_mhz",      "t_s_s",       "scale"};
  return names;
}

SystemSpec SystemConfig::to_spec() const {
  SystemSpec spec;
  spec.omega_0n = omega_0n_mhz ? from_mhz(*omega_0n_mhz) : kProtonConstants.gamma_n * b0_t.value_or(0.0);
  if (b0_t) spec.omega_0e = kProtonConstants.gamma_e * *b0_t;
  spec.delta_omega0 = from_mhz(delta_omega0_mhz);
  std::vector<SphericalPosition> positions;
  for (std::size_t i = 0; i < nuclei.size(); ++i) {
    const NucleusConfig& n = nuclei[i];
    NucleusSpec ns;
    ns.label = n.label.empty() ? "n" + std::to_string(i + 1) : n.label;
    ns.fermi_contact_zz = from_mhz(n.fermi_contact_mhz);
    if (n.position) {
      ns.position = SphericalPosition{n.position->r_m, n.position->theta, n.position->varphi};
      positions.push_back(*ns.position);
    }
    if (n.a_mhz) {
      ns.hyperfine = HyperfineParams{from_mhz(*n.a_mhz), from_mhz(*n.c_mhz), n.phi_hf};
    } else {
      ns.hyperfine = hyperfine_from_geometry(*ns.position, ns.fermi_contact_zz);
    }
    spec.nuclei.push_back(std::move(ns));
  }
  const auto k = static_cast<Eigen::Index>(nuclei.size());
  if (dipolar_mhz) {
    spec.dipolar = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) spec.dipolar(i, j) = from_mhz((*dipolar_mhz)[i][j]);
    }
  } else if (dipolar_from_geometry) {
    spec.dipolar = dipolar_from_positions(positions);
  }
  return spec;
}

SweepSchedule ScheduleConfig::to_schedule(double omega_0n) const {
  switch (kind) {
    case ScheduleKind::ConstantLock:
      return SweepSchedule::constant_lock(from_mhz(omega_1e_mhz), t_total_s, from_mhz(detuning_mhz));
    case ScheduleKind::LinearSweep:
      return SweepSchedule::linear_sweep(omega_0n, from_mhz(delta_omega_mhz), t_sweep_s, direction);
    case ScheduleKind::AHP:
      return ahp_schedule(from_mhz(omega_1max_mhz) * scale, from_mhz(alpha_mhz), t_s_s);
  }
  throw DomainError("unknown schedule kind");
}

ElectronAxis ScheduleConfig::initial_axis() const {
  return initial.value_or(kind == ScheduleKind::AHP ? ElectronAxis::Z : ElectronAxis::X);
}

RunConfig parse_config(const json& document) {
  ObjectReader r(document, "");
  RunConfig c;
  c.preset = r.optional_string("preset");
  const json* system = r.find("system");
  const json* schedule = r.find("schedule");
  const json* scan = r.find("scan");
  if (c.preset) {
    if (!is_preset(*c.preset)) throw ValidationError("preset", "unknown preset '" + *c.preset + "'");
    if (system != nullptr) throw ValidationError("system", "cannot be combined with preset");
    if (schedule != nullptr) throw ValidationError("schedule", "cannot be combined with preset");
    if (scan != nullptr) throw ValidationError("scan", "cannot be combined with preset");
  } else {
    if (system == nullptr) throw ValidationError("system", "required unless preset is given");
    if (schedule == nullptr) throw ValidationError("schedule", "required unless preset is given");
    c.system = parse_system(*system);
    c.schedule = parse_schedule(*schedule);
    if (scan != nullptr) c.scan = parse_scan(*scan);
  }
  if (const json* o = r.find("output")) c.output = parse_output(*o);
  if (const json* i = r.find("integrator")) c.integrator = parse_integrator(*i);
  r.finish();
  if (!c.preset) validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config", "cannot open " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("--config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(document);
}

void validate(const RunConfig& config) {
  if (config.preset) return;
  SystemSpec spec;
  try {
    spec = config.system.to_spec();
    spec.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(join("system", e.path()), e.what());
  } catch (const DomainError& e) {
    throw ValidationError("system", e.what());
  }
  try {
    (void)config.schedule.to_schedule(spec.omega_0n);
  } catch (const DomainError& e) {
    throw ValidationError("schedule", e.what());
  }
  if (config.schedule.kind != ScheduleKind::AHP && spec.k() == 0) {
    throw ValidationError("system.nuclei", "at least one nucleus required for this schedule");
  }
  if (config.scan) {
    const ScanConfig& s = *config.scan;
    if (s.grid.empty()) throw ValidationError("scan.grid", "must not be empty");
    if (is_nucleus_parameter(s.parameter)) {
      const std::size_t idx = s.nucleus.value_or(0);
      if (idx >= config.system.nuclei.size()) throw ValidationError("scan.nucleus", "out of range");
      if (config.system.nuclei[idx].position) {
        throw ValidationError("scan.parameter", "cannot scan a_mhz/c_mhz of a nucleus placed by position");
      }
    } else if (s.nucleus) {
      throw ValidationError("scan.nucleus", "only valid for a_mhz or c_mhz");
    }
    if (is_schedule_parameter(s.parameter) && !schedule_uses(config.schedule.kind, s.parameter)) {
      throw ValidationError("scan.parameter", "'" + s.parameter + "' does not apply to this schedule kind");
    }
  }
}

void apply_scan_value(RunConfig& config, const ScanConfig& scan, double value) {
  const std::string& p = scan.parameter;
  SystemConfig& sys = config.system;
  ScheduleConfig& sch = config.schedule;
  if (p == "a_mhz") {
    sys.nuclei.at(scan.nucleus.value_or(0)).a_mhz = value;
  } else if (p == "c_mhz") {
    sys.nuclei.at(scan.nucleus.value_or(0)).c_mhz = value;
  } else if (p == "delta_omega0_mhz") {
    sys.delta_omega0_mhz = value;
  } else if (p == "omega_0n_mhz") {
    sys.omega_0n_mhz = value;
  } else if (p == "delta_omega_mhz") {
    sch.delta_omega_mhz = value;
  } else if (p == "t_sweep_s") {
    sch.t_sweep_s = value;
  } else if (p == "omega_1e_mhz") {
    sch.omega_1e_mhz = value;
  } else if (p == "t_total_s") {
    sch.t_total_s = value;
  } else if (p == "detuning_mhz") {
    sch.detuning_mhz = value;
  } else if (p == "omega_1max_mhz") {
    sch.omega_1max_mhz = value;
  } else if (p == "alpha_mhz") {
    sch.alpha_mhz = value;
  } else if (p == "t_s_s") {
    sch.t_s_s = value;
  } else if (p == "scale") {
    sch.scale = value;
  } else {
    throw ValidationError("scan.parameter", "unknown scan parameter '" + p + "'");
  }
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  if (c.preset) {
    j["preset"] = *c.preset;
  } else {
    ordered_json sys;
    if (c.system.omega_0n_mhz) sys["omega_0n_mhz"] = *c.system.omega_0n_mhz;
    sys["delta_omega0_mhz"] = c.system.delta_omega0_mhz;
    if (c.system.b0_t) sys["b0_t"] = *c.system.b0_t;
    if (c.system.temperature_k) sys["temperature_k"] = *c.system.temperature_k;
    sys["nuclei"] = ordered_json::array();
    for (const auto& n : c.system.nuclei) {
      ordered_json nj;
      nj["label"] = n.label;
      if (n.a_mhz) nj["a_mhz"] = *n.a_mhz;
      if (n.c_mhz) nj["c_mhz"] = *n.c_mhz;
      nj["phi_hf"] = n.phi_hf;
      if (n.position) {
        nj["position"] = {{"r_m", n.position->r_m}, {"theta", n.position->theta}, {"varphi", n.position->varphi}};
      }
      nj["fermi_contact_mhz"] = n.fermi_contact_mhz;
      sys["nuclei"].push_back(std::move(nj));
    }
    if (c.system.dipolar_mhz) sys["dipolar_mhz"] = *c.system.dipolar_mhz;
    sys["dipolar_from_geometry"] = c.system.dipolar_from_geometry;
    j["system"] = std::move(sys);

    ordered_json sch;
    const ScheduleConfig& s = c.schedule;
    switch (s.kind) {
      case ScheduleKind::ConstantLock:
        sch["kind"] = "constant";
        sch["omega_1e_mhz"] = s.omega_1e_mhz;
        sch["t_total_s"] = s.t_total_s;
        sch["detuning_mhz"] = s.detuning_mhz;
        break;
      case ScheduleKind::LinearSweep:
        sch["kind"] = "linear";
        sch["delta_omega_mhz"] = s.delta_omega_mhz;
        sch["t_sweep_s"] = s.t_sweep_s;
        sch["direction"] = s.direction == SweepDirection::HighToLow ? "high_to_low" : "low_to_high";
        break;
      case ScheduleKind::AHP:
        sch["kind"] = "ahp";
        sch["omega_1max_mhz"] = s.omega_1max_mhz;
        sch["alpha_mhz"] = s.alpha_mhz;
        sch["t_s_s"] = s.t_s_s;
        sch["scale"] = s.scale;
        break;
    }
    sch["initial"] = s.initial_axis() == ElectronAxis::X ? "x" : "z";
    j["schedule"] = std::move(sch);

    if (c.scan) {
      ordered_json scan;
      scan["parameter"] = c.scan->parameter;
      if (c.scan->nucleus) scan["nucleus"] = *c.scan->nucleus;
      scan["grid"] = c.scan->grid;
      j["scan"] = std::move(scan);
    }
  }
  ordered_json out;
  out["format"] = format_name(c.output.format);
  if (c.output.path) out["path"] = *c.output.path;
  out["stride"] = c.output.stride;
  j["output"] = std::move(out);
  j["integrator"] = {{"tol", c.integrator.tol},
                     {"steps", c.integrator.steps},
                     {"samples", c.integrator.samples},
                     {"max_refinements", c.integrator.max_refinements}};
  return j;
}

std::string config_hash(const RunConfig& config) {
  ordered_json canonical = to_json(config);
  // Where the table is written does not change what is in it.
  canonical["output"].erase("path");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical.dump())));
  return buf;
}

std::string format_name(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ValidationError("--format", "expected csv or json");
}

}  // namespace anovel::cli
