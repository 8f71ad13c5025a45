#include "vcwave/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vcwave {

namespace {

Quartic quartic_from_trace_det(double tr, double det, int n) {
  const double n2 = static_cast<double>(n) * n;
  Quartic q;
  q.c = {Complex(n2 * n2, 0), Complex(tr * n2, 0), Complex(2.0 * n2 + det, 0),
         Complex(tr, 0), Complex(1.0, 0)};
  return q;
}

}  // namespace

Quartic characteristic_quartic(const CoeffMatrix& B, int n) {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  return quartic_from_trace_det(B.trace(), B.det(), n);
}

Quartic characteristic_quartic(const CanonicalForm& form, int n) {
  return characteristic_quartic(form.coeffs(), n);
}

std::array<Complex, 4> poly_roots(const Quartic& q) {
  if (q.c[4] == Complex(0.0, 0.0)) {
    throw std::invalid_argument("leading coefficient must be nonzero");
  }

  // Monic coefficients for the iteration.
  std::array<Complex, 4> a;
  for (int k = 0; k < 4; ++k) a[k] = q.c[k] / q.c[4];
  const auto eval_monic = [&](Complex z) {
    Complex acc(1.0, 0.0);
    for (int k = 3; k >= 0; --k) acc = acc * z + a[k];
    return acc;
  };

  // Evaluation noise floor: |p(z)| cannot be driven below roughly
  // eps * sum |a_k| |z|^k, which is where the iteration stalls when roots
  // are multiple; treat reaching it as convergence.
  const auto noise_floor = [&](Complex z) {
    const double az = std::abs(z);
    double scale = std::pow(az, 4);
    for (int k = 0; k < 4; ++k) scale += std::abs(a[k]) * std::pow(az, k);
    return 64.0 * std::numeric_limits<double>::epsilon() * scale;
  };

  std::array<Complex, 4> z;
  const Complex seed(0.4, 0.9);
  z[0] = seed;
  for (int k = 1; k < 4; ++k) z[k] = z[k - 1] * seed;

  for (int iter = 0; iter < 500; ++iter) {
    double max_update = 0.0;
    bool all_at_floor = true;
    for (int k = 0; k < 4; ++k) {
      Complex denom(1.0, 0.0);
      for (int j = 0; j < 4; ++j) {
        if (j != k) denom *= z[k] - z[j];
      }
      const Complex p = eval_monic(z[k]);
      if (std::abs(p) > noise_floor(z[k])) all_at_floor = false;
      const Complex step = denom == Complex(0.0, 0.0) ? Complex(0.0, 0.0)
                                                      : p / denom;
      z[k] -= step;
      max_update = std::max(max_update, std::abs(step));
    }
    bool converged = true;
    for (int k = 0; k < 4; ++k) {
      // Re-check per-root update criterion against the final positions.
      if (max_update > 1e-13 * (1.0 + std::abs(z[k]))) converged = false;
    }
    if (converged || all_at_floor) return z;
  }

  std::ostringstream os;
  os << "Durand-Kerner failed to converge; residuals:";
  for (int k = 0; k < 4; ++k) os << " " << std::abs(q.eval(z[k]));
  throw std::runtime_error(os.str());
}

Eigen::Vector4d rk4_integrate(const ModeBlock& block,
                              const Eigen::Vector4d& state, double t_end,
                              double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");

  const Eigen::Matrix4d& m = block.matrix;
  Eigen::Vector4d y = state;
  double t = 0.0;
  while (t < t_end) {
    const double h = std::min(dt, t_end - t);
    const Eigen::Vector4d k1 = m * y;
    const Eigen::Vector4d k2 = m * (y + 0.5 * h * k1);
    const Eigen::Vector4d k3 = m * (y + 0.5 * h * k2);
    const Eigen::Vector4d k4 = m * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return y;
}

GridState grid_from_modes(const ModalState& state, int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("grid_points must be >= 1");
  GridState g;
  g.u.assign(grid_points, 0.0);
  g.u_t.assign(grid_points, 0.0);
  g.v.assign(grid_points, 0.0);
  g.v_t.assign(grid_points, 0.0);
  const double dx = std::numbers::pi / (grid_points + 1);
  for (int k = 0; k < state.mode_count(); ++k) {
    const int n = k + 1;
    const Eigen::Vector4d& m = state.modes[k];
    for (int i = 0; i < grid_points; ++i) {
      const double s = std::sin(n * dx * (i + 1));
      g.u[i] += m[0] * s;
      g.u_t[i] += m[1] * s;
      g.v[i] += m[2] * s;
      g.v_t[i] += m[3] * s;
    }
  }
  return g;
}

namespace {

// Discrete energy: trapezoid of (1/2)(ut^2 + ux^2 + vt^2 + vx^2) with
// one-sided differences on the edges (boundary values are zero).
double grid_energy(const std::vector<double>& u, const std::vector<double>& ut,
                   const std::vector<double>& v, const std::vector<double>& vt,
                   double dx) {
  const int m = static_cast<int>(u.size());
  double kinetic = 0.0;
  for (int i = 0; i < m; ++i) kinetic += ut[i] * ut[i] + vt[i] * vt[i];
  double strain = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double ul = i == 0 ? 0.0 : u[i - 1];
    const double ur = i == m ? 0.0 : u[i];
    const double vl = i == 0 ? 0.0 : v[i - 1];
    const double vr = i == m ? 0.0 : v[i];
    const double du = (ur - ul) / dx;
    const double dv = (vr - vl) / dx;
    strain += du * du + dv * dv;
  }
  return 0.5 * dx * (kinetic + strain);
}

void laplacian(const std::vector<double>& w, double dx,
               std::vector<double>& out) {
  const int m = static_cast<int>(w.size());
  const double inv_dx2 = 1.0 / (dx * dx);
  for (int i = 0; i < m; ++i) {
    const double left = i == 0 ? 0.0 : w[i - 1];
    const double right = i == m - 1 ? 0.0 : w[i + 1];
    out[i] = (left - 2.0 * w[i] + right) * inv_dx2;
  }
}

}  // namespace

FdTrace fd_leapfrog(const CoeffMatrix& B, const GridState& init, double t_end,
                    double dt, std::span<const double> sample_times) {
  const int m = init.size();
  if (m < 2 || init.u_t.size() != init.u.size() ||
      init.v.size() != init.u.size() || init.v_t.size() != init.u.size()) {
    throw std::invalid_argument("grid state is empty or inconsistent");
  }
  if (!(dt > 0.0) || !(t_end >= 0.0)) {
    throw std::invalid_argument("dt must be > 0 and t_end >= 0");
  }
  const double dx = init.dx();
  if (dt > 0.9 * dx) {
    std::ostringstream os;
    os << "CFL violation: dt = " << dt << " exceeds 0.9 dx = " << 0.9 * dx;
    throw std::invalid_argument(os.str());
  }

  const int total_steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));

  // Map each requested sample to its nearest step.
  std::vector<int> sample_steps(sample_times.size());
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    if (!(t >= 0.0) || t > t_end + 0.5 * dt) {
      throw std::invalid_argument("sample time outside [0, t_end]");
    }
    sample_steps[i] = std::min(total_steps,
                               static_cast<int>(std::llround(t / dt)));
  }

  // Centered treatment of the velocity terms couples (u,v) at the new
  // level through one constant 2x2 matrix.
  const double r = 0.5 * dt;
  Eigen::Matrix2d coupling;
  coupling << 1.0 + B.alpha * r, B.beta * r, B.gamma * r, 1.0 + B.eta * r;
  const Eigen::Matrix2d solve = coupling.inverse();

  std::vector<double> u_prev = init.u, v_prev = init.v;
  std::vector<double> lu(m), lv(m);
  laplacian(u_prev, dx, lu);
  laplacian(v_prev, dx, lv);

  // Second-order Taylor start.
  std::vector<double> u_cur(m), v_cur(m);
  for (int i = 0; i < m; ++i) {
    const double utt = lu[i] - B.alpha * init.u_t[i] - B.beta * init.v_t[i];
    const double vtt = lv[i] - B.gamma * init.u_t[i] - B.eta * init.v_t[i];
    u_cur[i] = u_prev[i] + dt * init.u_t[i] + 0.5 * dt * dt * utt;
    v_cur[i] = v_prev[i] + dt * init.v_t[i] + 0.5 * dt * dt * vtt;
  }

  FdTrace trace;
  trace.times.resize(sample_times.size());
  trace.energy.resize(sample_times.size());
  const auto record = [&](int step, const std::vector<double>& ut,
                          const std::vector<double>& vt,
                          const std::vector<double>& u,
                          const std::vector<double>& v) {
    for (std::size_t i = 0; i < sample_steps.size(); ++i) {
      if (sample_steps[i] == step) {
        trace.times[i] = step * dt;
        trace.energy[i] = grid_energy(u, ut, v, vt, dx);
      }
    }
  };

  record(0, init.u_t, init.v_t, u_prev, v_prev);

  std::vector<double> u_next(m), v_next(m), ut(m), vt(m);
  for (int step = 1; step <= total_steps; ++step) {
    laplacian(u_cur, dx, lu);
    laplacian(v_cur, dx, lv);
    for (int i = 0; i < m; ++i) {
      const double rhs_u = 2.0 * u_cur[i] - u_prev[i] + dt * dt * lu[i] +
                           r * (B.alpha * u_prev[i] + B.beta * v_prev[i]);
      const double rhs_v = 2.0 * v_cur[i] - v_prev[i] + dt * dt * lv[i] +
                           r * (B.gamma * u_prev[i] + B.eta * v_prev[i]);
      u_next[i] = solve(0, 0) * rhs_u + solve(0, 1) * rhs_v;
      v_next[i] = solve(1, 0) * rhs_u + solve(1, 1) * rhs_v;
    }
    // Level `step` now has a centered velocity (u^{step+1} - u^{step-1}).
    for (int i = 0; i < m; ++i) {
      ut[i] = (u_next[i] - u_prev[i]) / (2.0 * dt);
      vt[i] = (v_next[i] - v_prev[i]) / (2.0 * dt);
    }
    record(step, ut, vt, u_cur, v_cur);
    std::swap(u_prev, u_cur);
    std::swap(v_prev, v_cur);
    std::swap(u_cur, u_next);
    std::swap(v_cur, v_next);
  }

  trace.final_state.u = u_cur;
  trace.final_state.v = v_cur;
  trace.final_state.u_t.resize(m);
  trace.final_state.v_t.resize(m);
  for (int i = 0; i < m; ++i) {
    trace.final_state.u_t[i] = (u_cur[i] - u_prev[i]) / dt;
    trace.final_state.v_t[i] = (v_cur[i] - v_prev[i]) / dt;
  }
  return trace;
}

}  // namespace vcwave
