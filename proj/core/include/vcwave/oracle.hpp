#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vcwave/coeffs.hpp"
#include "vcwave/modal_sim.hpp"

// Independent brute-force verifiers. Nothing here shares code with the
// closed-form paths it is used to check.

namespace vcwave {

struct Quartic {
  std::array<Complex, 5> c{};  // c[k] multiplies lambda^k, c[4] != 0

  Complex eval(Complex z) const {
    Complex acc = c[4];
    for (int k = 3; k >= 0; --k) acc = acc * z + c[k];
    return acc;
  }
};

/// Characteristic quartic of the mode-n block for a general coupling
/// matrix: lambda^4 + tr lambda^3 + (2n^2 + det) lambda^2 + tr n^2 lambda
/// + n^4 with tr, det of the 2x2 coupling matrix.
Quartic characteristic_quartic(const CoeffMatrix& B, int n);
Quartic characteristic_quartic(const CanonicalForm& form, int n);

/// All four roots by Durand-Kerner iteration from the standard staggered
/// initial guesses (0.4 + 0.9i)^k. Converged when every update is at most
/// 1e-13 (1 + |root|) or every residual has reached the evaluation noise
/// floor (which is where the iteration stalls at multiple roots); at most
/// 500 iterations, then std::runtime_error carrying the residuals.
std::array<Complex, 4> poly_roots(const Quartic& q);

/// Classical fixed-step fourth-order Runge-Kutta for one mode block;
/// global error O(dt^4).
Eigen::Vector4d rk4_integrate(const ModeBlock& block,
                              const Eigen::Vector4d& state, double t_end,
                              double dt);

/// Finite-difference state on the uniform interior grid of (0, pi):
/// M nodes x_i = i pi/(M+1), homogeneous Dirichlet at both ends.
struct GridState {
  std::vector<double> u, u_t, v, v_t;

  int size() const { return static_cast<int>(u.size()); }
  double dx() const { return M_PI / (size() + 1); }
};

/// GridState sampling of coefficient data: u = sum a_n sin(n x), etc.
GridState grid_from_modes(const ModalState& state, int grid_points);

struct FdTrace {
  std::vector<double> times;   // requested times snapped to the step grid
  std::vector<double> energy;  // trapezoidal discrete energy
  GridState final_state;
};

/// Whole-PDE oracle: leapfrog scheme, second-order central differences in
/// space and time. The velocity coupling terms are discretized by the
/// centered average (w^{k+1} - w^{k-1})/(2 dt), which keeps the update
/// explicit after one constant 2x2 solve per node; the first step is the
/// second-order Taylor start. Energy is the trapezoidal analogue of the
/// continuous energy with u_t taken as the centered time difference.
/// Requested sample times are snapped to the nearest step. Enforces the
/// CFL condition dt <= 0.9 dx (std::invalid_argument names the largest
/// admissible dt when violated).
FdTrace fd_leapfrog(const CoeffMatrix& B, const GridState& init, double t_end,
                    double dt, std::span<const double> sample_times);

}  // namespace vcwave
