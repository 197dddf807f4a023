#include "anovel/ensemble.hpp"

#include <cmath>
#include <numeric>

#include "anovel/errors.hpp"

namespace anovel {

std::vector<std::string> CloudSpec::labels() const {
  std::vector<std::string> out;
  out.reserve(system.k());
  for (std::size_t i = 0; i < system.k(); ++i) {
    const std::string& label = system.nuclei[i].label;
    out.push_back(label.empty() ? "n" + std::to_string(i + 1) : label);
  }
  return out;
}

void CloudSpec::validate() const {
  if (system.k() == 0) throw ValidationError("nuclei", "a cloud needs at least one nucleus");
  system.validate();
}

std::vector<double> CloudResult::final_per_nucleus() const { return trajectory.final().nuclear_z; }

double CloudResult::final_total() const { return trajectory.final().total_nuclear(); }

double CloudResult::time_average_total() const {
  const auto total = trajectory.total_nuclear();
  const auto& t = trajectory.times;
  double area = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) area += 0.5 * (total[i] + total[i - 1]) * (t[i] - t[i - 1]);
  return area / (t.back() - t.front());
}

CloudResult simulate_cloud(const CloudSpec& cloud, const SweepSchedule& schedule,
                           const PropagateOptions& options, ElectronAxis initial) {
  cloud.validate();
  CloudResult result;
  result.labels = cloud.labels();
  result.trajectory = propagate(cloud.system, schedule, initial_state(cloud.system, initial), options);
  return result;
}

double single_pass_efficiency(const SystemSpec& system, const SweepSchedule& schedule,
                              const PropagateOptions& options) {
  PropagateOptions opts = options;
  opts.store_states = false;
  const Trajectory traj = propagate(system, schedule, initial_state(system, ElectronAxis::X), opts);
  return traj.final().total_nuclear();
}

double DiffusionParams::spacing() const { return rho_n ? std::cbrt(1.0 / *rho_n) : a; }

void DiffusionParams::validate() const {
  if (rho_n && !(*rho_n > 0.0)) throw DomainError("diffusion: rho_n must be positive");
  if (!(spacing() > 0.0)) throw DomainError("diffusion: a must be positive");
  if (!(T2 > 0.0)) throw DomainError("diffusion: T2 must be positive");
  if (dimensionality < 1 || dimensionality > 3) throw DomainError("diffusion: dimensionality must be 1, 2 or 3");
}

double diffusion_constant(const DiffusionParams& params) {
  params.validate();
  const double a = params.spacing();
  return a * a / (50.0 * params.T2);
}

double diffusion_time(double L, double D, int dimensionality) {
  if (!(L > 0.0)) throw DomainError("diffusion_time: L must be positive");
  if (!(D > 0.0)) throw DomainError("diffusion_time: D must be positive");
  if (dimensionality < 1 || dimensionality > 3) throw DomainError("diffusion_time: dimensionality must be 1, 2 or 3");
  return L * L / (2.0 * dimensionality * D);
}

double diffusion_time(const DiffusionParams& params) {
  return diffusion_time(params.L, diffusion_constant(params), params.dimensionality);
}

void RepetitionModel::validate() const {
  if (!(gamma_1e >= 0.0)) throw DomainError("repetition: gamma_1e must be non-negative");
  if (!(gamma_1bulk >= 0.0) || !std::isfinite(gamma_1bulk)) {
    throw DomainError("repetition: gamma_1bulk must be finite and non-negative");
  }
  if (!(p_e >= 0.0 && p_e <= 1.0)) throw DomainError("repetition: p_e must lie in [0, 1]");
  if (!(T_s >= 0.0 && T_sweep >= 0.0 && T_off >= 0.0)) throw DomainError("repetition: times must be non-negative");
  if (!(transfer_efficiency >= 0.0 && transfer_efficiency <= 1.0)) {
    throw DomainError("repetition: transfer_efficiency must lie in [0, 1]");
  }
  if (!(cloud_size >= 1.0)) throw DomainError("repetition: cloud_size must be at least 1");
  if (!(bulk_size > 0.0)) throw DomainError("repetition: bulk_size must be positive");
  if (!(initial_nuclear >= 0.0 && initial_nuclear <= p_e)) {
    throw DomainError("repetition: initial_nuclear must lie in [0, p_e]");
  }
  if (T_1n && !(*T_1n > 0.0)) throw DomainError("repetition: T_1n must be positive");
}

RepetitionResult repeat_experiment(const RepetitionModel& m, std::size_t N) {
  m.validate();
  if (N == 0) throw DomainError("repeat_experiment: N must be positive");
  if (N > m.N_max) throw DomainError("repeat_experiment: N exceeds N_max");

  const double k = m.cloud_size;
  const double nb = m.bulk_size;
  const double electron_memory = std::isinf(m.gamma_1e) ? 0.0 : std::exp(-m.gamma_1e * m.T_off);
  const double gap_memory = std::exp(-m.gamma_1bulk * (1.0 + k / nb) * m.T_off);

  RepetitionResult out;
  out.P_cloud.reserve(N);
  out.P_bulk.reserve(N);
  out.P_electron.reserve(N);

  double e = m.p_e;
  double c = m.initial_nuclear;
  double b = m.initial_nuclear;
  for (std::size_t r = 0; r < N; ++r) {
    const double delta = m.transfer_efficiency * (e - c);
    e -= delta;
    c += delta / k;

    e = m.p_e + (e - m.p_e) * electron_memory;
    const double mean = (k * c + nb * b) / (k + nb);
    const double gap = (c - b) * gap_memory;
    c = mean + nb / (k + nb) * gap;
    b = mean - k / (k + nb) * gap;

    out.P_cloud.push_back(c);
    out.P_bulk.push_back(b);
    out.P_electron.push_back(e);
  }
  out.mean_cloud = std::accumulate(out.P_cloud.begin(), out.P_cloud.end(), 0.0) / static_cast<double>(N);
  if (m.T_1n) out.budget_fraction = static_cast<double>(N) * m.T_cycle() / *m.T_1n;
  return out;
}

}  // namespace anovel
