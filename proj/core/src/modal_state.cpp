#include "vcwave/modal_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vcwave {

namespace {

// Kahan-compensated accumulator.
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

}  // namespace

double modal_energy(const ModalState& state) {
  return modal_energy_weighted(state, 1.0);
}

double modal_energy_weighted(const ModalState& state, double kappa) {
  Compensated acc;
  for (int k = 0; k < state.mode_count(); ++k) {
    const Eigen::Vector4d& m = state.modes[k];
    const double n2 = static_cast<double>(k + 1) * (k + 1);
    acc.add(kappa * (m[1] * m[1] + n2 * m[0] * m[0]) +
            (m[3] * m[3] + n2 * m[2] * m[2]));
  }
  return 0.25 * std::numbers::pi * acc.sum;
}

ModalState random_modal_state(Lcg64& rng, int mode_count) {
  if (mode_count < 1) throw std::invalid_argument("mode_count must be >= 1");
  ModalState state;
  state.modes.reserve(mode_count);
  for (int n = 1; n <= mode_count; ++n) {
    const double u = rng.uniform(-1.0, 1.0) / n;
    const double y = rng.uniform(-1.0, 1.0);
    const double v = rng.uniform(-1.0, 1.0) / n;
    const double z = rng.uniform(-1.0, 1.0);
    state.modes.emplace_back(u, y, v, z);
  }
  return state;
}

ModalState project_to_modes(std::span<const double> u,
                            std::span<const double> u_t,
                            std::span<const double> v,
                            std::span<const double> v_t, int mode_count) {
  const std::size_t m = u.size();
  if (m == 0 || u_t.size() != m || v.size() != m || v_t.size() != m) {
    throw std::invalid_argument("grid arrays must be non-empty and equal length");
  }
  if (mode_count < 1) throw std::invalid_argument("mode_count must be >= 1");

  const double dx = std::numbers::pi / static_cast<double>(m + 1);
  ModalState state;
  state.modes.reserve(mode_count);
  for (int n = 1; n <= mode_count; ++n) {
    Eigen::Vector4d coeff = Eigen::Vector4d::Zero();
    for (std::size_t i = 0; i < m; ++i) {
      const double w = std::sin(n * dx * static_cast<double>(i + 1));
      coeff[0] += w * u[i];
      coeff[1] += w * u_t[i];
      coeff[2] += w * v[i];
      coeff[3] += w * v_t[i];
    }
    // Trapezoid weights are uniform on the interior because the boundary
    // values vanish; (2/pi) * dx * sum.
    state.modes.push_back(coeff * (2.0 / std::numbers::pi * dx));
  }
  return state;
}

}  // namespace vcwave
