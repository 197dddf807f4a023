// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [c01 ... c11]   (no argument runs every criterion)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "anovel/block_model.hpp"
#include "anovel/cli/presets.hpp"
#include "anovel/cli/runner.hpp"
#include "anovel/ensemble.hpp"
#include "anovel/leakage.hpp"
#include "anovel/operators.hpp"
#include "anovel/propagate.hpp"
#include "anovel/schedule.hpp"
#include "anovel/system.hpp"
#include "support/oracles.hpp"

using namespace anovel;
namespace pinned = anovel::cli::pinned;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> check;
};

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* pattern, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, pattern, args...);
  return buffer;
}

// Invariant reports from every trajectory produced in this process.
InvariantReport g_invariants;
std::size_t g_trajectories = 0;

Trajectory tracked(const SystemSpec& spec, const SweepSchedule& schedule, const QuantumState& rho0,
                   const PropagateOptions& options = {}) {
  Trajectory t = propagate(spec, schedule, rho0, options);
  g_invariants.merge(t.invariants);
  ++g_trajectories;
  return t;
}

double time_average(const std::vector<double>& t, const std::vector<double>& y) {
  double area = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) area += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  return area / (t.back() - t.front());
}

constexpr double kStride = 20e-9;  // 101 samples over the 2 us sweep

Trajectory shift_run(double C_rel, double delta_rel) {
  PropagateOptions o;
  o.n_samples = 101;
  return tracked(pinned::shift_system(C_rel, delta_rel), pinned::shift_sweep(),
                 initial_state(pinned::shift_system(C_rel, delta_rel), ElectronAxis::X), o);
}

// ---------------------------------------------------------------------------

Outcome landau_zener() {
  Stopwatch clock;
  double worst = 0.0;
  double worst_oracle = 0.0;
  for (double a_mhz : {1.0, 2.0, 5.0}) {
    for (double gamma : {0.01, 0.2, 1.0, 3.0}) {
      const double A = from_mhz(a_mhz);
      const double dw = 40.0 * A;
      const double T = gamma * 2.0 * dw / ((A / 4.0) * (A / 4.0));
      const double w0n = 2.0 * dw;
      const SystemSpec spec = SystemSpec::single(w0n, A);
      const SweepSchedule sweep = SweepSchedule::linear_sweep(w0n, dw, T);

      // |up, Down> in the X basis is the upper diabatic ZQ state.
      QuantumState rho0{CMatrix::Zero(4, 4), ElectronBasis::X};
      rho0.rho(1, 1) = 1.0;
      PropagateOptions o;
      o.n_samples = 2;
      o.tol = 1e-6;
      o.max_refinements = 12;
      const Trajectory traj = tracked(spec, sweep, rho0, o);
      const double numeric = traj.states.back().in_basis(ElectronBasis::X).rho(1, 1).real();

      const double analytic = lz_probability(A, dw, T);
      const double reference = oracle::two_level_survival(
          [&](double t) { return 0.5 * (sweep.amplitude(t) - w0n); }, A / 4.0, T, 1e-7);
      worst = std::max(worst, std::abs(analytic - numeric));
      worst_oracle = std::max(worst_oracle, std::abs(reference - numeric));
    }
  }
  const double elapsed = clock.seconds();
  return {worst <= 0.02 && worst_oracle <= 1e-4 && elapsed < 10.0,
          fmt("max |P_LZ - P_num| = %.4f (<= 0.02), max |P_oracle - P_num| = %.1e, %.2f s (< 10 s)",
              worst, worst_oracle, elapsed)};
}

Outcome conventional_half() {
  const double w0n = from_mhz(51.0);
  const double A = 0.1 * w0n;
  const SystemSpec spec = SystemSpec::single(w0n, A);
  const BlockModel m = block_model(w0n, w0n, A);
  const double period = kTwoPi / (2.0 * m.Omega_ZQ);
  PropagateOptions o;
  o.n_samples = 4001;
  const Trajectory traj =
      tracked(spec, SweepSchedule::constant_lock(w0n, 10.0 * period), initial_state(spec, ElectronAxis::X), o);
  const double mean = time_average(traj.times, traj.nuclear(0));
  return {std::abs(mean - 0.5) <= 0.02, fmt("10-period average = %.4f (0.50 +- 0.02)", mean)};
}

Outcome adiabatic_transfer() {
  Stopwatch clock;
  const Trajectory traj = shift_run(0.0, 0.0);
  const double elapsed = clock.seconds();
  const double final = traj.final().nuclear_z[0];
  return {final >= 0.95 && elapsed < 30.0, fmt("final = %.5f (>= 0.95), %.2f s (< 30 s)", final, elapsed)};
}

Outcome robustness() {
  const double base = shift_run(0.0, 0.0).final().nuclear_z[0];
  const double w0n = pinned::shift_system(0.0, 0.0).omega_0n;
  const SweepSchedule sweep = pinned::shift_sweep();

  struct Case {
    const char* name;
    double C_rel;
    double delta_rel;
    double effective_offset_rel;  // C shifts the matching point like an offset of C/2
  };
  bool pass = true;
  std::ostringstream detail;
  detail << fmt("base %.4f", base);
  for (const Case& c : {Case{"C=0.5", 0.5, 0.0, 0.25}, Case{"dw0=0.5", 0.0, 0.5, 0.5}}) {
    const Trajectory traj = shift_run(c.C_rel, c.delta_rel);
    const double final = traj.final().nuclear_z[0];
    const auto mid = transfer_midpoint(traj.times, traj.nuclear(0));
    const auto t_star = crossing_time(c.effective_offset_rel * w0n, sweep, w0n);
    const bool final_ok = std::abs(final - base) <= 0.02;
    const bool mid_ok = mid && t_star && std::abs(*mid - *t_star) <= kStride;
    pass = pass && final_ok && mid_ok;
    detail << fmt("; %s: final %.4f (|d| = %.1f pp, limit 2), midpoint %.1f ns vs t* %.1f ns (limit 20 ns)",
                  c.name, final, 100.0 * std::abs(final - base), mid ? *mid * 1e9 : NAN,
                  t_star ? *t_star * 1e9 : NAN);
  }
  // Diagnostic only: starting the electron along its tilted effective field.
  const SystemSpec tilted = pinned::shift_system(0.0, 0.5);
  const double polar = std::atan2(sweep.amplitude(0.0), tilted.delta_omega0);
  PropagateOptions o;
  o.n_samples = 101;
  const Trajectory along = tracked(tilted, sweep, initial_state_along(tilted, polar), o);
  detail << fmt("; tilted start dw0=0.5: final %.4f", along.final().nuclear_z[0]);
  return {pass, detail.str()};
}

Outcome analytic_equivalence() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> larmor(10.0, 100.0);
  std::uniform_real_distribution<double> ratio(0.5, 1.5);
  std::uniform_real_distribution<double> coupling(0.01, 0.3);
  double worst = 0.0;
  for (int set = 0; set < 5; ++set) {
    const double w0n = from_mhz(larmor(rng));
    const double w1e = ratio(rng) * w0n;
    const double A = coupling(rng) * w0n;
    const SystemSpec spec = SystemSpec::single(w0n, A);
    const BlockModel m = block_model(w1e, w0n, A);
    PropagateOptions o;
    o.n_samples = 2001;
    const Trajectory traj =
        tracked(spec, SweepSchedule::constant_lock(w1e, 20.0 / m.Omega_ZQ), initial_state(spec, ElectronAxis::X), o);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      worst = std::max(worst, std::abs(traj.observables[i].nuclear_z[0] - magnetization_analytic(m, traj.times[i])));
    }
  }
  return {worst <= 1e-6, fmt("max |analytic - numeric| = %.2e over 5 sets (<= 1e-6)", worst)};
}

Outcome structural_invariants() {
  // Add the remaining trajectory families: cloud sweeps, AHP with a nucleus.
  PropagateOptions o;
  o.n_samples = 51;
  for (std::size_t k : {2, 4}) {
    const CloudResult r = simulate_cloud(CloudSpec{pinned::cloud(k)}, pinned::cloud_sweep(), o);
    g_invariants.merge(r.trajectory.invariants);
    ++g_trajectories;
  }
  AhpOptions ahp;
  ahp.full_system = SystemSpec::single(from_mhz(51.0), from_mhz(5.1));
  const AhpRotation rot = simulate_ahp_rotation(from_mhz(150.0), pinned::ahp(), ahp);
  g_invariants.merge(rot.invariants);
  ++g_trajectories;

  // Exact block structure of the X-basis Hamiltonian.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const CMatrix& P = block_operators().projector_dq;
  double commutator = 0.0;
  double with_c = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double w0n = from_mhz(50.0 * u(rng));
    const double A = 0.2 * u(rng) * w0n;
    const double w1e = u(rng) * w0n;
    const CMatrix H = build_rotating_hamiltonian(SystemSpec::single(w0n, A), w1e, ElectronBasis::X).entries;
    commutator = std::max(commutator, (P * H - H * P).cwiseAbs().maxCoeff());
    const CMatrix Hc =
        build_rotating_hamiltonian(SystemSpec::single(w0n, A, 0.1 * w0n), w1e, ElectronBasis::X).entries;
    with_c = std::max(with_c, (P * Hc - Hc * P).cwiseAbs().maxCoeff());
  }
  const InvariantReport& r = g_invariants;
  return {r.satisfied() && commutator == 0.0 && with_c > 0.0,
          fmt("%zu trajectories: trace err %.1e, herm err %.1e, min eig %.1e, purity drift %.1e; "
              "[P_DQ, H] = %.1f exactly (C != 0 gives %.2e)",
              g_trajectories, r.max_trace_error, r.max_hermiticity_error, r.min_eigenvalue, r.max_purity_drift,
              commutator, with_c)};
}

Outcome leakage_shape() {
  const cli::ResultTable table = cli::run_preset("fig8", cli::IntegratorConfig{});
  const auto t = table.column("t");
  const auto same = table.column("same_plus");
  const auto cross = table.column("cross_plus_minus");
  const double t_star = table.metadata().at("crossing_time_s").get<double>();
  const double stride = t[1] - t[0];

  auto nearest_extremum = [&](const std::vector<double>& y, bool maximum) {
    double best = INFINITY;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
      const bool is_ext = maximum ? (y[i] >= y[i - 1] && y[i] >= y[i + 1]) : (y[i] <= y[i - 1] && y[i] <= y[i + 1]);
      if (is_ext && std::abs(t[i] - t_star) < std::abs(best - t_star)) best = t[i];
    }
    return best;
  };
  const double t_max = nearest_extremum(same, true);
  const double t_min = nearest_extremum(cross, false);
  const bool pass = std::abs(t_max - t_star) <= stride && std::abs(t_min - t_star) <= stride;
  return {pass, fmt("t* = %.1f ns, same max at %.1f ns, cross min at %.1f ns, stride %.1f ns", t_star * 1e9,
                    t_max * 1e9, t_min * 1e9, stride * 1e9)};
}

Outcome ahp_robustness() {
  const cli::ResultTable table = cli::run_preset("appendixA", cli::IntegratorConfig{});
  const auto tips = table.column("tip_from_axis");
  const double worst = *std::max_element(tips.begin(), tips.end());
  const double t_min = table.metadata().at("min_sweep_time_s").get<double>();
  const bool pass = worst <= 2.0 && std::abs(t_min - 3e-9) <= 0.2 * 3e-9;
  return {pass, fmt("tips %.3f / %.3f / %.3f deg (<= 2), min_sweep_time = %.3f ns (3 ns +- 20%%)", tips[0], tips[1],
                    tips[2], t_min * 1e9)};
}

Outcome thermal() {
  const double pe = thermal_polarization(kProtonConstants.gamma_e * 1.2, 0.3);
  const double pn = thermal_polarization(kProtonConstants.gamma_n * 1.2, 0.3);
  const bool pass = pe >= 0.97 && pe <= 0.995 && pn >= 0.002 && pn <= 0.005;
  return {pass, fmt("p_e = %.5f in [0.97, 0.995], p_n = %.5f in [0.002, 0.005]", pe, pn)};
}

Outcome diffusion() {
  DiffusionParams p;
  p.a = 0.32e-9;
  p.T2 = 0.2e-3;
  p.L = 50e-9;
  const double D = diffusion_constant(p);
  const double exact_D = p.a * p.a / (50.0 * p.T2);
  const double T = diffusion_time(p);
  const double exact_T = p.L * p.L / (2.0 * exact_D);
  const bool closed = D == exact_D && T == exact_T;

  const double quoted_D = 1.8e-14 * 1e-4;  // cm^2/s -> m^2/s
  const double quoted_time = 100.0;
  const double time_from_quoted = diffusion_time(p.L, quoted_D);
  const double ratio_D = std::max(D, quoted_D) / std::min(D, quoted_D);
  const double ratio_T = std::max(time_from_quoted, quoted_time) / std::min(time_from_quoted, quoted_time);
  const bool magnitude = ratio_D <= 15.0 && ratio_T <= 15.0;
  return {closed && magnitude,
          fmt("closed forms exact: %s; D = %.3e m^2/s vs quoted %.1e (x%.2f, quoted constants are mutually "
              "inconsistent); T_diffus with quoted D = %.0f s vs ~100 s (x%.2f); limit x15",
              closed ? "yes" : "no", D, quoted_D, ratio_D, time_from_quoted, ratio_T)};
}

Outcome repetition() {
  const cli::ResultTable table = cli::run_preset("fig9", cli::IntegratorConfig{});
  const double pe = table.metadata().at("p_e").get<double>();
  bool pass = true;
  std::ostringstream detail;
  double previous_level = -1.0;
  for (const char* ratio : {"ratio10", "ratio100", "ratio1000"}) {
    const auto p = table.column(std::string("P_cloud_") + ratio);
    bool monotone = true;
    for (std::size_t i = 1; i < p.size(); ++i) monotone = monotone && p[i] >= p[i - 1];
    const double level = p.back();
    const bool below = level < pe;
    const bool rising = level > previous_level;
    pass = pass && monotone && below && rising;
    detail << fmt("%s: monotone %s, saturation %.4f < p_e %.4f; ", ratio, monotone ? "yes" : "no", level, pe);
    previous_level = level;
  }
  detail << "saturation increases with ratio: " << (pass ? "yes" : "no");
  return {pass, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"c01", "Landau-Zener oracle", landau_zener},
      {"c02", "conventional lock gives 50%", conventional_half},
      {"c03", "adiabatic sweep near-unity transfer", adiabatic_transfer},
      {"c04", "robustness to C and offset", robustness},
      {"c05", "analytic vs numeric magnetization", analytic_equivalence},
      {"c06", "structural invariants", structural_invariants},
      {"c07", "leakage extrema at crossing", leakage_shape},
      {"c08", "AHP robustness", ahp_robustness},
      {"c09", "thermal polarization", thermal},
      {"c10", "diffusion closed forms, quoted values order of magnitude", diffusion},
      {"c11", "repetition saturation", repetition},
  };

  std::vector<std::string> wanted(argv + 1, argv + argc);
  // c06 inspects every trajectory in the run; single-criterion mode seeds it
  // with the trajectory-producing criteria first.
  if (wanted.size() == 1 && wanted[0] == "c06") wanted = {"c01", "c02", "c03", "c04", "c05", "c06"};
  const bool quiet_prefix = argc == 2 && std::string(argv[1]) == "c06";

  int failures = 0;
  bool matched = false;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    matched = true;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (quiet_prefix && c.id != "c06") continue;
    if (!o.pass) ++failures;
    std::printf("%s %s %s | %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion\n");
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
