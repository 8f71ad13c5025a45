#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "vcwave/rng.hpp"

namespace vcwave {

/// Finite sine-series state of the coupled system on (0, pi).
///
/// modes[k] holds the coefficients (u_n, y_n, v_n, z_n) of sin(n x) in
/// (u, u_t, v, v_t) for n = k + 1. All dynamics act mode by mode.
struct ModalState {
  std::vector<Eigen::Vector4d> modes;

  int mode_count() const { return static_cast<int>(modes.size()); }
};

/// Total energy (1/2) int |u_t|^2 + |u_x|^2 + |v_t|^2 + |v_x|^2 dx of a
/// sine-series state; with int_0^pi sin^2(nx) dx = pi/2 this is
/// (pi/4) sum_n [ y_n^2 + n^2 u_n^2 + z_n^2 + n^2 v_n^2 ].
/// Modes are accumulated in increasing n with compensated summation so the
/// value is independent of threading and build options.
double modal_energy(const ModalState& state);

/// Weighted energy E_kappa: the u-half of the integrand scaled by kappa.
double modal_energy_weighted(const ModalState& state, double kappa);

/// Generic random initial data: u_n, v_n ~ U(-1,1)/n and y_n, z_n ~ U(-1,1),
/// drawn in increasing n, four draws per mode in the order (u, y, v, z).
/// Every mode then carries an O(1) share of the initial energy.
ModalState random_modal_state(Lcg64& rng, int mode_count);

/// Projects gridded data onto the first `mode_count` sine modes by
/// trapezoidal quadrature, u_n = (2/pi) int u sin(nx) dx. The arrays hold
/// values at the interior nodes x_i = i*pi/(M+1), i = 1..M, with homogeneous
/// Dirichlet values at both ends; the quadrature error is O((pi/(M+1))^2).
ModalState project_to_modes(std::span<const double> u,
                            std::span<const double> u_t,
                            std::span<const double> v,
                            std::span<const double> v_t, int mode_count);

}  // namespace vcwave
