#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vcwave/coeffs.hpp"
#include "vcwave/spectrum.hpp"

namespace vcwave {

/// The 4x4 block governing mode n: d/dt (u, y, v, z) =
/// (y, -n^2 u - alpha y - beta z, z, -gamma y - n^2 v - eta z).
struct ModeBlock {
  int n = 1;
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Zero();
};

ModeBlock mode_block(const CoeffMatrix& B, int n);
ModeBlock mode_block(const CanonicalForm& form, int n);

/// Dense matrix exponential by scaling and squaring with the degree-13
/// Pade kernel; the squaring count comes from the 1-norm of the argument.
Eigen::Matrix4d matrix_exponential(const Eigen::Matrix4d& m);

/// exp(t * block.matrix) * state. Forward time only (t >= 0), throws
/// std::domain_error otherwise.
Eigen::Vector4d evolve_mode(const ModeBlock& block,
                            const Eigen::Vector4d& state, double t);

/// Sampled energy history. E_kappa is present only when a weighted energy
/// was requested, in which case kappa records the weight.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energy;
  std::optional<std::vector<double>> energy_kappa;
  double kappa = 1.0;
};

/// Evolves every mode independently from t = 0 to each sample (each sample
/// is reached directly from the initial data, never by chaining, so no
/// time-stepping error accumulates). When kappa is given the weighted
/// energy E_kappa = (pi/4) sum [kappa y^2 + kappa n^2 u^2 + z^2 + n^2 v^2]
/// is recorded alongside E. Times must be non-empty, start at >= 0 and be
/// strictly increasing.
EnergyTrace simulate(const CoeffMatrix& B, const ModalState& init,
                     std::span<const double> times,
                     std::optional<double> kappa = std::nullopt);
EnergyTrace simulate(const CanonicalForm& form, const ModalState& init,
                     std::span<const double> times,
                     std::optional<double> kappa = std::nullopt);

/// Checks the energy identity dE/dt = -a int (u_t^2 + v_t^2) for the
/// rotation form: samples E on a uniform grid of spacing dt and returns the
/// largest deviation of the forward difference quotient from the
/// dissipation functional evaluated at the midpoint state,
///   max_k | [E(t_{k+1}) - E(t_k)]/dt + a (pi/2) sum_n (y_n^2 + z_n^2) |.
/// Second-order accurate: halving dt shrinks the result about fourfold.
/// Requires a rotation form and at least 3 samples (t_end >= 2 dt).
double energy_dissipation_residual(const CanonicalForm& form,
                                   const ModalState& init, double t_end,
                                   double dt);

/// Weight making the dissipation quadratic form kappa*a y^2 + b y z + c z^2
/// positive definite: kappa = max(1, b^2 / (2 a c)), which satisfies
/// b^2 - 4 kappa a c < 0 strictly. Requires a > 0 and c > 0.
double choose_kappa(double a, double b, double c);

struct FitReport {
  double omega_hat = 0.0;   ///< fitted exponential rate
  double p_hat = 0.0;       ///< fitted polynomial exponent (on E itself)
  double rel_err_omega = 0.0;
};

/// Fits log E(t) ~ log M + q log t - omega t by linear least squares over
/// the window [T/2, T], T the final sample time. Samples are taken at local
/// maxima of E to suppress oscillation; traces without interior maxima
/// (monotone decay) fall back to every sample in the window. The window is
/// shrunk from the right past any samples below 1e-300. Requires E > 0 and
/// at least 20 usable samples in the window.
FitReport fit_decay(const EnergyTrace& trace, const DecayPrediction& prediction);

struct IntegralInequalityReport {
  double c_hat = 0.0;  ///< max_S (int_S^T E) / E(S), trapezoidal
  bool holds = false;  ///< C stabilized under T-doubling and the bound held
  double growth_ratio = 0.0;  ///< c_hat at T over c_hat at T/2
  bool bound_ok = false;      ///< E(t) <= E(0) e^{1 - t/c_hat} for t >= c_hat
};

/// Evaluates the integral inequality int_S^T E <= C E(S) on a sampled
/// trace (E_kappa when present, E otherwise; the trace must be
/// non-increasing up to 1e-10 relative slack). holds requires the ratio
/// c_hat(T)/c_hat(T/2) < 1.05 and the exponential consequence
/// E(t) <= E(0) e^{1 - t/c_hat} at every sample t >= c_hat.
IntegralInequalityReport integral_inequality_check(const EnergyTrace& trace);

/// CSV export: header "t,E,E_kappa,logE", 17-significant-digit decimals,
/// LF line endings; the E_kappa column is empty when not computed, and
/// logE is the natural logarithm.
void write_trace_csv(std::ostream& out, const EnergyTrace& trace);

}  // namespace vcwave
