#include "vcwave/modal_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace vcwave {

namespace {

struct Compensated {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

ModeBlock block_from_entries(double alpha, double beta, double gamma,
                             double eta, int n) {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  const double n2 = static_cast<double>(n) * n;
  ModeBlock block;
  block.n = n;
  block.matrix << 0, 1, 0, 0,
      -n2, -alpha, 0, -beta,
      0, 0, 0, 1,
      0, -gamma, -n2, -eta;
  return block;
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("times must be non-empty");
  if (!(times[0] >= 0.0)) {
    throw std::invalid_argument("times must start at t >= 0");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("times must be strictly increasing");
    }
  }
}

void append_csv_value(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

}  // namespace

ModeBlock mode_block(const CoeffMatrix& B, int n) {
  return block_from_entries(B.alpha, B.beta, B.gamma, B.eta, n);
}

ModeBlock mode_block(const CanonicalForm& form, int n) {
  return mode_block(form.coeffs(), n);
}

Eigen::Matrix4d matrix_exponential(const Eigen::Matrix4d& m) {
  // Degree-13 Pade approximant with scaling and squaring; theta is the
  // standard double-precision bound for the order-13 kernel.
  static constexpr double kTheta13 = 5.371920351148152;
  static constexpr double kB[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};

  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  }
  const Eigen::Matrix4d a = m / std::exp2(squarings);

  const Eigen::Matrix4d a2 = a * a;
  const Eigen::Matrix4d a4 = a2 * a2;
  const Eigen::Matrix4d a6 = a2 * a4;
  const Eigen::Matrix4d i = Eigen::Matrix4d::Identity();

  const Eigen::Matrix4d u =
      a * (a6 * (kB[13] * a6 + kB[11] * a4 + kB[9] * a2) + kB[7] * a6 +
           kB[5] * a4 + kB[3] * a2 + kB[1] * i);
  const Eigen::Matrix4d v = a6 * (kB[12] * a6 + kB[10] * a4 + kB[8] * a2) +
                            kB[6] * a6 + kB[4] * a4 + kB[2] * a2 + kB[0] * i;

  Eigen::Matrix4d r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

Eigen::Vector4d evolve_mode(const ModeBlock& block,
                            const Eigen::Vector4d& state, double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("evolution runs forward in time only (t >= 0)");
  }
  if (t == 0.0) return state;
  return matrix_exponential(t * block.matrix) * state;
}

namespace {

EnergyTrace simulate_impl(const CoeffMatrix& B, const ModalState& init,
                          std::span<const double> times,
                          std::optional<double> kappa) {
  check_times(times);
  if (init.mode_count() < 1) {
    throw std::invalid_argument("initial state must hold at least one mode");
  }

  const std::size_t n_samples = times.size();
  std::vector<Compensated> acc(n_samples);
  std::vector<Compensated> acc_kappa(kappa ? n_samples : 0);

  for (int k = 0; k < init.mode_count(); ++k) {
    const int n = k + 1;
    const ModeBlock block = mode_block(B, n);
    const double n2 = static_cast<double>(n) * n;
    for (std::size_t s = 0; s < n_samples; ++s) {
      const Eigen::Vector4d m = evolve_mode(block, init.modes[k], times[s]);
      const double e_u = m[1] * m[1] + n2 * m[0] * m[0];
      const double e_v = m[3] * m[3] + n2 * m[2] * m[2];
      acc[s].add(e_u + e_v);
      if (kappa) acc_kappa[s].add(*kappa * e_u + e_v);
    }
  }

  EnergyTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.energy.resize(n_samples);
  const double quarter_pi = 0.25 * std::numbers::pi;
  for (std::size_t s = 0; s < n_samples; ++s) {
    trace.energy[s] = quarter_pi * acc[s].sum;
  }
  if (kappa) {
    trace.kappa = *kappa;
    trace.energy_kappa.emplace(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
      (*trace.energy_kappa)[s] = quarter_pi * acc_kappa[s].sum;
    }
  }
  return trace;
}

}  // namespace

EnergyTrace simulate(const CoeffMatrix& B, const ModalState& init,
                     std::span<const double> times,
                     std::optional<double> kappa) {
  return simulate_impl(B, init, times, kappa);
}

EnergyTrace simulate(const CanonicalForm& form, const ModalState& init,
                     std::span<const double> times,
                     std::optional<double> kappa) {
  return simulate_impl(form.coeffs(), init, times, kappa);
}

double energy_dissipation_residual(const CanonicalForm& form,
                                   const ModalState& init, double t_end,
                                   double dt) {
  if (form.kind != CanonicalKind::Rotation) {
    throw std::invalid_argument(
        "dissipation identity check applies to the rotation form");
  }
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("t_end and dt must be positive");
  }
  const int steps = static_cast<int>(std::floor(t_end / dt + 1e-9));
  if (steps < 2) {
    throw std::invalid_argument("need at least 3 samples (t_end >= 2 dt)");
  }

  const CoeffMatrix B = form.coeffs();
  const int n_modes = init.mode_count();
  std::vector<ModeBlock> blocks;
  blocks.reserve(n_modes);
  for (int n = 1; n <= n_modes; ++n) blocks.push_back(mode_block(B, n));

  const double half_pi = 0.5 * std::numbers::pi;
  double max_residual = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t0 = k * dt;
    Compensated e0, e1, diss;
    for (int j = 0; j < n_modes; ++j) {
      const double n2 = static_cast<double>(j + 1) * (j + 1);
      const Eigen::Vector4d m0 = evolve_mode(blocks[j], init.modes[j], t0);
      const Eigen::Vector4d m1 = evolve_mode(blocks[j], init.modes[j], t0 + dt);
      const Eigen::Vector4d mm =
          evolve_mode(blocks[j], init.modes[j], t0 + 0.5 * dt);
      e0.add(m0[1] * m0[1] + n2 * m0[0] * m0[0] + m0[3] * m0[3] +
             n2 * m0[2] * m0[2]);
      e1.add(m1[1] * m1[1] + n2 * m1[0] * m1[0] + m1[3] * m1[3] +
             n2 * m1[2] * m1[2]);
      diss.add(mm[1] * mm[1] + mm[3] * mm[3]);
    }
    const double rate = 0.25 * std::numbers::pi * (e1.sum - e0.sum) / dt;
    const double dissipation = form.a * half_pi * diss.sum;
    max_residual = std::max(max_residual, std::abs(rate + dissipation));
  }
  return max_residual;
}

double choose_kappa(double a, double b, double c) {
  if (!(a > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("choose_kappa requires a > 0 and c > 0");
  }
  return std::max(1.0, b * b / (2.0 * a * c));
}

FitReport fit_decay(const EnergyTrace& trace,
                    const DecayPrediction& prediction) {
  const std::size_t n = trace.times.size();
  if (n != trace.energy.size() || n == 0) {
    throw std::invalid_argument("trace is empty or inconsistent");
  }

  const double t_final = trace.times.back();
  const double t_start = 0.5 * t_final;
  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < n; ++i) {
    if (trace.times[i] >= t_start && trace.times[i] > 0.0) window.push_back(i);
  }
  // Shrink past underflowed samples, then reject non-positive energies.
  while (!window.empty() && trace.energy[window.back()] < 1e-300 &&
         trace.energy[window.back()] >= 0.0) {
    window.pop_back();
  }
  for (std::size_t i : window) {
    if (!(trace.energy[i] > 0.0)) {
      throw std::domain_error("non-positive energy in fit window");
    }
  }

  // Sample at local maxima to suppress oscillation; monotone traces have
  // none, in which case every window sample is used.
  std::vector<std::size_t> picks;
  for (std::size_t j = 1; j + 1 < window.size(); ++j) {
    const double e = trace.energy[window[j]];
    if (e >= trace.energy[window[j - 1]] && e >= trace.energy[window[j + 1]]) {
      picks.push_back(window[j]);
    }
  }
  if (picks.size() < 20) picks = window;
  if (picks.size() < 20) {
    throw std::invalid_argument("fewer than 20 samples in the fit window");
  }

  Eigen::MatrixXd design(picks.size(), 3);
  Eigen::VectorXd rhs(picks.size());
  for (std::size_t r = 0; r < picks.size(); ++r) {
    const double t = trace.times[picks[r]];
    design(r, 0) = 1.0;
    design(r, 1) = std::log(t);
    design(r, 2) = t;
    rhs(r) = std::log(trace.energy[picks[r]]);
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);

  FitReport report;
  report.p_hat = coef(1);
  report.omega_hat = -coef(2);
  report.rel_err_omega =
      prediction.omega > 0.0
          ? std::abs(report.omega_hat - prediction.omega) / prediction.omega
          : std::numeric_limits<double>::quiet_NaN();
  return report;
}

IntegralInequalityReport integral_inequality_check(const EnergyTrace& trace) {
  const std::vector<double>& e =
      trace.energy_kappa ? *trace.energy_kappa : trace.energy;
  const std::vector<double>& t = trace.times;
  const std::size_t n = t.size();
  if (n < 3 || e.size() != n) {
    throw std::invalid_argument("trace too short for the integral check");
  }
  const double slack = 1e-10 * std::max(1.0, e.front());
  for (std::size_t i = 1; i < n; ++i) {
    if (e[i] > e[i - 1] + slack) {
      throw std::invalid_argument("trace is increasing beyond tolerance");
    }
  }

  // Suffix trapezoids int_{t_i}^{t_end} E, largest ratio against E(t_i).
  const auto c_hat_up_to = [&](std::size_t last) {
    std::vector<double> suffix(last + 1, 0.0);
    for (std::size_t i = last; i-- > 0;) {
      suffix[i] = suffix[i + 1] +
                  0.5 * (e[i] + e[i + 1]) * (t[i + 1] - t[i]);
    }
    double best = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
      if (e[i] > 0.0) best = std::max(best, suffix[i] / e[i]);
    }
    return best;
  };

  IntegralInequalityReport report;
  report.c_hat = c_hat_up_to(n - 1);

  const double t_half = t.front() + 0.5 * (t.back() - t.front());
  std::size_t half_idx = 0;
  while (half_idx + 1 < n && t[half_idx + 1] <= t_half) ++half_idx;
  const double c_half = half_idx >= 2 ? c_hat_up_to(half_idx) : 0.0;

  report.growth_ratio = c_half > 0.0
                            ? report.c_hat / c_half
                            : std::numeric_limits<double>::infinity();

  report.bound_ok = true;
  if (report.c_hat > 0.0 && e.front() > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (t[i] < report.c_hat) continue;
      const double bound =
          e.front() * std::exp(1.0 - t[i] / report.c_hat);
      if (e[i] > bound * (1.0 + 1e-9)) {
        report.bound_ok = false;
        break;
      }
    }
  } else {
    report.bound_ok = false;
  }

  report.holds = std::isfinite(report.c_hat) && report.c_hat > 0.0 &&
                 report.growth_ratio < 1.05 && report.bound_ok;
  return report;
}

void write_trace_csv(std::ostream& out, const EnergyTrace& trace) {
  out << "t,E,E_kappa,logE\n";
  std::string line;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    line.clear();
    append_csv_value(line, trace.times[i]);
    line += ',';
    append_csv_value(line, trace.energy[i]);
    line += ',';
    if (trace.energy_kappa) append_csv_value(line, (*trace.energy_kappa)[i]);
    line += ',';
    append_csv_value(line, std::log(trace.energy[i]));
    line += '\n';
    out << line;
  }
}

}  // namespace vcwave
