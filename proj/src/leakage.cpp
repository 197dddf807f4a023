#include "anovel/leakage.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "anovel/errors.hpp"
#include "anovel/operators.hpp"

namespace anovel {

namespace {

double ratio_or_flag(double numerator, double denominator, bool& degenerate) {
  if (denominator == 0.0) {
    degenerate = true;
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(numerator / denominator);
}

void require_positive_rabi(double omega_1e, const char* where) {
  if (!(omega_1e > 0.0)) throw DomainError(std::string(where) + ": omega_1e must be positive");
}

}  // namespace

TiltedFrame tilted_frame(double delta_omega0, double omega_1e, double omega_0n, double A) {
  require_positive_rabi(omega_1e, "tilted_frame");
  TiltedFrame f;
  f.theta_s = std::atan(delta_omega0 / omega_1e);
  f.omega_eff = std::hypot(delta_omega0, omega_1e);
  f.block = block_model(f.omega_eff, omega_0n, A * std::cos(f.theta_s));
  f.psi_t = f.block.psi_dq;
  f.phi_t = f.block.phi_zq;
  f.Omega_DQ_t = f.block.Omega_DQ;
  f.Omega_ZQ_t = f.block.Omega_ZQ;
  return f;
}

std::optional<double> crossing_time(double delta_omega0, const SweepSchedule& schedule,
                                    double omega_0n) {
  if (schedule.kind() != ScheduleKind::LinearSweep) {
    throw DomainError("crossing_time: linear sweep required");
  }
  if (std::abs(delta_omega0) >= omega_0n) return std::nullopt;
  const double target = std::sqrt(omega_0n * omega_0n - delta_omega0 * delta_omega0);
  const double T = schedule.duration();
  const double a0 = schedule.amplitude(0.0);
  const double slope = (schedule.amplitude(T) - a0) / T;
  const double t = (target - a0) / slope;
  if (!(t >= 0.0 && t <= T)) return std::nullopt;
  return t;
}

LeakageRates tilted_leakage_rates(double A, double C, double delta_omega0, double omega_1e,
                                  double omega_0n) {
  const TiltedFrame f = tilted_frame(delta_omega0, omega_1e, omega_0n, A);
  const double s = std::sin(f.theta_s);
  const double c = std::cos(f.theta_s);
  const double diff = f.psi_t - f.phi_t;
  const double sum = f.psi_t + f.phi_t;

  LeakageRates r;
  const double same = ratio_or_flag(A * s * std::sin(diff) + C * c * std::cos(sum),
                                    4.0 * (f.Omega_DQ_t - f.Omega_ZQ_t), r.degenerate_same);
  const double cross = ratio_or_flag(A * s * std::cos(diff) + C * c * std::sin(sum),
                                     4.0 * (f.Omega_DQ_t + f.Omega_ZQ_t), r.degenerate_cross);
  r.same_plus = r.same_minus = same;
  r.cross_plus_minus = r.cross_minus_plus = cross;
  return r;
}

LeakageRates first_order_amplitudes(double A, double C, double delta_omega0, double omega_1e,
                                    double omega_0n) {
  require_positive_rabi(omega_1e, "first_order_amplitudes");
  const SystemSpec spec = SystemSpec::single(omega_0n, A, C, delta_omega0);
  const CMatrix H = hamiltonian_parts(spec).at(omega_1e, 0.0);

  // Electron eigenvectors along the effective field play the role of |up>_X, |down>_X.
  const Eigen::Matrix2cd h = omega_1e * spin::sx() + delta_omega0 * spin::sz();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
  const Eigen::Vector2cd up = es.eigenvectors().col(1);
  const Eigen::Vector2cd down = es.eigenvectors().col(0);
  const Eigen::Vector2cd n_up(1.0, 0.0);
  const Eigen::Vector2cd n_down(0.0, 1.0);

  auto product = [](const Eigen::Vector2cd& e, const Eigen::Vector2cd& n) {
    Eigen::Vector4cd v;
    v << e(0) * n(0), e(0) * n(1), e(1) * n(0), e(1) * n(1);
    return v;
  };
  Eigen::Matrix4cd V;
  V.col(0) = product(up, n_up);
  V.col(1) = product(up, n_down);
  V.col(2) = product(down, n_up);
  V.col(3) = product(down, n_down);
  const Eigen::Matrix4cd Ht = V.adjoint() * H * V;

  // Diagonalize each block; column 1 is the upper (+) state.
  auto block_eigen = [&](int i, int j) {
    Eigen::Matrix2cd b;
    b << Ht(i, i), Ht(i, j), Ht(j, i), Ht(j, j);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> s(b);
    std::array<Eigen::Vector4cd, 2> vecs;
    for (int c = 0; c < 2; ++c) {
      vecs[c] = Eigen::Vector4cd::Zero();
      vecs[c](i) = s.eigenvectors()(0, c);
      vecs[c](j) = s.eigenvectors()(1, c);
    }
    return std::pair{vecs, Eigen::Vector2d(s.eigenvalues())};
  };
  const auto [phi, e_phi] = block_eigen(0, 3);
  const auto [psi, e_psi] = block_eigen(1, 2);

  auto amp = [&](int a, int b, bool& flag) {
    const double element = std::abs(phi[a].dot(Ht * psi[b]));
    return ratio_or_flag(element, e_phi(a) - e_psi(b), flag);
  };
  LeakageRates r;
  r.same_plus = amp(1, 1, r.degenerate_same);
  r.same_minus = amp(0, 0, r.degenerate_same);
  r.cross_plus_minus = amp(1, 0, r.degenerate_cross);
  r.cross_minus_plus = amp(0, 1, r.degenerate_cross);
  return r;
}

std::optional<double> transfer_midpoint(const std::vector<double>& times,
                                        const std::vector<double>& values) {
  if (times.size() != values.size() || times.empty()) {
    throw DomainError("transfer_midpoint: times and values must be non-empty and of equal length");
  }
  const double half = 0.5 * values.back();
  if (!(half > 0.0)) return std::nullopt;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] >= half) {
      const double f = (half - values[i - 1]) / (values[i] - values[i - 1]);
      return times[i - 1] + f * (times[i] - times[i - 1]);
    }
  }
  return times.back();
}

std::vector<double> LeakageTrace::same() const {
  std::vector<double> out;
  out.reserve(rates.size());
  for (const auto& r : rates) out.push_back(r.same_plus);
  return out;
}

std::vector<double> LeakageTrace::cross() const {
  std::vector<double> out;
  out.reserve(rates.size());
  for (const auto& r : rates) out.push_back(r.cross_plus_minus);
  return out;
}

LeakageTrace leakage_trace(const SystemSpec& spec, const SweepSchedule& schedule,
                           std::size_t n_points) {
  if (schedule.kind() != ScheduleKind::LinearSweep) {
    throw DomainError("leakage_trace: linear sweep required");
  }
  if (n_points < 2) throw DomainError("leakage_trace: n_points must be at least 2");
  if (spec.k() != 1) throw DomainError("leakage_trace: single-nucleus system required");
  const HyperfineParams& hf = spec.nuclei.front().hyperfine;

  LeakageTrace trace;
  trace.times.reserve(n_points);
  trace.omega_1e.reserve(n_points);
  trace.rates.reserve(n_points);
  const double T = schedule.duration();
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(n_points - 1);
    const double w1e = schedule.amplitude(t);
    trace.times.push_back(t);
    trace.omega_1e.push_back(w1e);
    trace.rates.push_back(tilted_leakage_rates(hf.A, hf.C, spec.delta_omega0, w1e, spec.omega_0n));
  }
  return trace;
}

}  // namespace anovel
