#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "test_helpers.hpp"
#include "vcwave/modal_sim.hpp"
#include "vcwave/oracle.hpp"
#include "vcwave/rng.hpp"

using namespace vcwave;
using vcwave::testing::char_poly;

namespace {

CanonicalForm rotation(double a, double b) {
  CanonicalForm f;
  f.kind = CanonicalKind::Rotation;
  f.a = a;
  f.b = b;
  return f;
}

CanonicalForm triangular(double a, double b, double c) {
  CanonicalForm f;
  f.kind = CanonicalKind::Triangular;
  f.a = a;
  f.b = b;
  f.c = c;
  return f;
}

std::vector<double> linspace(double t0, double t1, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) {
    t[i] = t0 + (t1 - t0) * static_cast<double>(i) / (count - 1);
  }
  return t;
}

ModalState single_mode(int n_total, int n, const Eigen::Vector4d& coeff) {
  ModalState s;
  s.modes.assign(n_total, Eigen::Vector4d::Zero());
  s.modes[n - 1] = coeff;
  return s;
}

}  // namespace

TEST_CASE("mode_block: characteristic polynomial matches the quartic") {
  // Undamped n = 1: (lambda^2 + 1)^2.
  const auto c0 = char_poly(mode_block(CoeffMatrix{0, 0, 0, 0}, 1).matrix);
  CHECK(c0[4] == doctest::Approx(1));
  CHECK(c0[3] == doctest::Approx(0));
  CHECK(c0[2] == doctest::Approx(2));
  CHECK(c0[1] == doctest::Approx(0));
  CHECK(c0[0] == doctest::Approx(1));

  // a = c = 2, b = 0 at n = 1: (lambda^2 + 2 lambda + 1)^2.
  const auto c1 = char_poly(mode_block(triangular(2, 0, 2), 1).matrix);
  CHECK(c1[3] == doctest::Approx(4));
  CHECK(c1[2] == doctest::Approx(6));
  CHECK(c1[1] == doctest::Approx(4));
  CHECK(c1[0] == doctest::Approx(1));

  // Random coupling at n = 7 against the trace/det expansion.
  Lcg64 rng(0xb10c);
  for (int trial = 0; trial < 50; ++trial) {
    const CoeffMatrix B{rng.uniform(-5, 5), rng.uniform(-5, 5),
                        rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const int n = 7;
    const double n2 = 49.0;
    const auto c = char_poly(mode_block(B, n).matrix);
    const double scale = n2 * n2;
    CHECK(std::abs(c[3] - B.trace()) <= 1e-9 * scale);
    CHECK(std::abs(c[2] - (2 * n2 + B.det())) <= 1e-9 * scale);
    CHECK(std::abs(c[1] - B.trace() * n2) <= 1e-9 * scale);
    CHECK(std::abs(c[0] - n2 * n2) <= 1e-9 * scale);
  }
}

TEST_CASE("evolve_mode: identity at t = 0 and rejection of t < 0") {
  const ModeBlock block = mode_block(CoeffMatrix{1, 2, 3, 4}, 2);
  const Eigen::Vector4d state(0.1, -0.2, 0.3, -0.4);
  CHECK((evolve_mode(block, state, 0.0) - state).norm() == 0.0);
  CHECK_THROWS_AS(evolve_mode(block, state, -1.0), std::domain_error);
}

TEST_CASE("evolve_mode: undamped quarter period rotates the mode") {
  const ModeBlock block = mode_block(CoeffMatrix{0, 0, 0, 0}, 1);
  const Eigen::Vector4d out =
      evolve_mode(block, Eigen::Vector4d(1, 0, 0, 0), M_PI_2);
  CHECK(std::abs(out[0]) < 1e-13);
  CHECK(out[1] == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(out[2] == 0.0);
  CHECK(out[3] == 0.0);
}

TEST_CASE("evolve_mode agrees with the RK4 oracle") {
  const ModeBlock block = mode_block(rotation(1, 1), 1);
  const Eigen::Vector4d init(1, 0, 0, 0);
  const Eigen::Vector4d exact = evolve_mode(block, init, 1.0);
  const Eigen::Vector4d approx = rk4_integrate(block, init, 1.0, 1e-4);
  CHECK((exact - approx).norm() <= 1e-8 * exact.norm());
}

TEST_CASE("semigroup property of the mode propagator") {
  Lcg64 rng(0xb20c);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 8);
    const ModeBlock block =
        mode_block(CoeffMatrix{rng.uniform(0, 3), rng.uniform(-2, 2),
                               rng.uniform(-2, 2), rng.uniform(0, 3)},
                   n);
    const double s = rng.uniform(0, 5);
    const double t = rng.uniform(0, 5);
    Eigen::Vector4d state(rng.uniform(-1, 1), rng.uniform(-1, 1),
                          rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Eigen::Vector4d direct = evolve_mode(block, state, s + t);
    const Eigen::Vector4d chained =
        evolve_mode(block, evolve_mode(block, state, s), t);
    CHECK((direct - chained).norm() <= 1e-10 * std::max(1.0, direct.norm()));
  }
}

TEST_CASE("simulate: trivial initial data") {
  ModalState zero;
  zero.modes.assign(4, Eigen::Vector4d::Zero());
  const auto times = linspace(0, 10, 11);
  const EnergyTrace trace = simulate(CoeffMatrix{1, 0, 0, 1}, zero, times);
  for (double e : trace.energy) CHECK(e == 0.0);

  const ModalState one = single_mode(1, 1, Eigen::Vector4d(1, 0, 0, 0));
  const std::vector<double> t0{0.0, 1.0};
  const EnergyTrace at0 = simulate(CoeffMatrix{0, 0, 0, 0}, one, t0);
  CHECK(at0.energy[0] == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
}

TEST_CASE("simulate validates its time grid") {
  ModalState one = single_mode(1, 1, Eigen::Vector4d(1, 0, 0, 0));
  const std::vector<double> empty;
  CHECK_THROWS_AS(simulate(CoeffMatrix{0, 0, 0, 0}, one, empty),
                  std::invalid_argument);
  const std::vector<double> bad{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(simulate(CoeffMatrix{0, 0, 0, 0}, one, bad),
                  std::invalid_argument);
  const std::vector<double> neg{-1.0, 1.0};
  CHECK_THROWS_AS(simulate(CoeffMatrix{0, 0, 0, 0}, one, neg),
                  std::invalid_argument);
}

TEST_CASE("simulate: asymptotic slope of log E matches the predicted rate") {
  const CanonicalForm f = rotation(1, 1);
  const ModalState init = single_mode(1, 1, Eigen::Vector4d(1, 0, 0, 0));
  const auto times = linspace(0, 50, 1001);
  const EnergyTrace trace = simulate(f, init, times);
  const DecayPrediction pred = decay_prediction(f);
  const FitReport fit = fit_decay(trace, pred);
  CHECK(fit.rel_err_omega < 0.02);
}

TEST_CASE("simulate: superposition of modes") {
  Lcg64 rng(0xb30c);
  const CoeffMatrix B{1, 0.5, -0.5, 2};
  ModalState joint = random_modal_state(rng, 5);
  const auto times = linspace(0, 5, 21);
  const EnergyTrace all = simulate(B, joint, times);

  std::vector<double> sum(times.size(), 0.0);
  for (int n = 1; n <= 5; ++n) {
    ModalState solo = single_mode(5, n, joint.modes[n - 1]);
    const EnergyTrace part = simulate(B, solo, times);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part.energy[i];
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    CHECK(std::abs(all.energy[i] - sum[i]) <=
          1e-12 * std::max(1.0, all.energy[i]));
  }
}

TEST_CASE("simulate: energy identity at t = 0") {
  Lcg64 rng(0xb40c);
  const ModalState init = random_modal_state(rng, 16);
  const std::vector<double> times{0.0, 0.5};
  const EnergyTrace trace = simulate(CoeffMatrix{1, 1, -1, 1}, init, times);
  CHECK(trace.energy[0] ==
        doctest::Approx(modal_energy(init)).epsilon(1e-14));
}

TEST_CASE("simulate: weighted energy stays within the equivalence bounds") {
  Lcg64 rng(0xb50c);
  const CanonicalForm f = triangular(1, 2, 3);
  const double kappa = choose_kappa(1, 2, 3);
  const ModalState init = random_modal_state(rng, 8);
  const auto times = linspace(0, 10, 51);
  const EnergyTrace trace = simulate(f, init, times, kappa);
  REQUIRE(trace.energy_kappa.has_value());
  const double lo = std::min(kappa, 1.0);
  const double hi = std::max(kappa, 1.0);
  for (std::size_t i = 0; i < trace.energy.size(); ++i) {
    CHECK((*trace.energy_kappa)[i] >= lo * trace.energy[i] - 1e-12);
    CHECK((*trace.energy_kappa)[i] <= hi * trace.energy[i] + 1e-12);
  }
}

TEST_CASE("simulate: marginal system conserves the energy") {
  Lcg64 rng(0xb60c);
  const ModalState init = random_modal_state(rng, 8);
  const auto times = linspace(0, 100, 101);
  const EnergyTrace trace = simulate(CoeffMatrix{0, 0, 0, 0}, init, times);
  const double e0 = trace.energy[0];
  for (double e : trace.energy) {
    CHECK(std::abs(e - e0) <= 1e-12 * e0);
  }
}

TEST_CASE("simulate: no decay without stability") {
  Lcg64 rng(0xb70c);
  const CanonicalForm f = triangular(-1, 0, 1);
  const ModalState init = random_modal_state(rng, 16);
  const std::vector<double> times{0.0, 50.0};
  const EnergyTrace trace = simulate(f, init, times);
  CHECK(trace.energy[1] > trace.energy[0]);
}

TEST_CASE("energy_dissipation_residual: conservative limit") {
  const CanonicalForm f = rotation(0, 1);
  const ModalState init = single_mode(2, 1, Eigen::Vector4d(1, 0, 0.5, 0));
  const double residual = energy_dissipation_residual(f, init, 0.5, 1e-3);
  CHECK(residual <= 1e-10);
}

TEST_CASE("energy_dissipation_residual: second-order in the sampling step") {
  const CanonicalForm f = rotation(1, 1);
  ModalState init = single_mode(3, 1, Eigen::Vector4d(1, 0, 0, 0));
  init.modes[1] = Eigen::Vector4d(0.3, -0.2, 0.1, 0.4);
  const double e0 = modal_energy(init);
  const double coarse = energy_dissipation_residual(f, init, 1.0, 2e-3);
  const double fine = energy_dissipation_residual(f, init, 1.0, 1e-3);
  CHECK(fine <= 1e-4 * e0);
  const double ratio = coarse / fine;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("energy_dissipation_residual input contract") {
  const ModalState init = single_mode(1, 1, Eigen::Vector4d(1, 0, 0, 0));
  CHECK_THROWS_AS(
      energy_dissipation_residual(triangular(1, 0, 1), init, 1.0, 1e-3),
      std::invalid_argument);
  CHECK_THROWS_AS(energy_dissipation_residual(rotation(1, 1), init, 1e-3, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("choose_kappa arithmetic and domain") {
  CHECK(choose_kappa(1, 0, 1) == 1.0);
  CHECK(choose_kappa(1, 4, 1) == 8.0);
  CHECK(16.0 - 4.0 * 8.0 * 1.0 * 1.0 < 0.0);
  CHECK(choose_kappa(2, 1, 5) == 1.0);
  CHECK_THROWS_AS(choose_kappa(0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(choose_kappa(1, 1, -2), std::invalid_argument);
}

TEST_CASE("fit_decay: exact exponential model") {
  EnergyTrace trace;
  trace.times = linspace(0.0, 10.0, 201);
  trace.energy.resize(trace.times.size());
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    trace.energy[i] = std::exp(-3.0 * trace.times[i]);
  }
  DecayPrediction pred;
  pred.omega = 3.0;
  const FitReport fit = fit_decay(trace, pred);
  CHECK(std::abs(fit.omega_hat - 3.0) < 1e-6);
  CHECK(std::abs(fit.p_hat) < 1e-6);
}

TEST_CASE("fit_decay: exact polynomial-times-exponential model") {
  EnergyTrace trace;
  trace.times = linspace(10.0, 50.0, 801);
  trace.energy.resize(trace.times.size());
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    trace.energy[i] = std::pow(t, 6.0) * std::exp(-4.0 * t);
  }
  DecayPrediction pred;
  pred.omega = 4.0;
  const FitReport fit = fit_decay(trace, pred);
  CHECK(std::abs(fit.omega_hat - 4.0) < 1e-3);
  CHECK(std::abs(fit.p_hat - 6.0) < 1e-2);
}

TEST_CASE("fit_decay error paths") {
  EnergyTrace trace;
  trace.times = linspace(0.0, 10.0, 30);
  trace.energy.assign(30, 1.0);
  trace.energy[25] = -1.0;
  DecayPrediction pred;
  pred.omega = 1.0;
  CHECK_THROWS_AS(fit_decay(trace, pred), std::domain_error);

  EnergyTrace tiny;
  tiny.times = linspace(0.0, 1.0, 10);
  tiny.energy.assign(10, 1.0);
  CHECK_THROWS_AS(fit_decay(tiny, pred), std::invalid_argument);
}

TEST_CASE("integral_inequality_check: exact exponential") {
  EnergyTrace trace;
  trace.times = linspace(0.0, 40.0, 2001);
  trace.energy.resize(trace.times.size());
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    trace.energy[i] = std::exp(-trace.times[i]);
  }
  const IntegralInequalityReport rep = integral_inequality_check(trace);
  CHECK(rep.c_hat == doctest::Approx(1.0).epsilon(0.01));
  CHECK(rep.holds);
  CHECK(rep.bound_ok);
}

TEST_CASE("integral_inequality_check: constant trace never stabilizes") {
  EnergyTrace trace;
  trace.times = linspace(0.0, 40.0, 401);
  trace.energy.assign(trace.times.size(), 1.0);
  const IntegralInequalityReport rep = integral_inequality_check(trace);
  CHECK(rep.c_hat == doctest::Approx(40.0).epsilon(0.01));
  CHECK_FALSE(rep.holds);
}

TEST_CASE("integral_inequality_check on a simulated weighted trace") {
  Lcg64 rng(0xb80c);
  const CanonicalForm f = triangular(1, 2, 3);
  const ModalState init = random_modal_state(rng, 16);
  const auto times = linspace(0, 50, 1001);
  const EnergyTrace trace =
      simulate(f, init, times, choose_kappa(1, 2, 3));
  const IntegralInequalityReport rep = integral_inequality_check(trace);
  CHECK(rep.holds);
}

TEST_CASE("integral_inequality_check rejects growing traces") {
  EnergyTrace trace;
  trace.times = linspace(0.0, 10.0, 11);
  trace.energy.resize(11);
  for (int i = 0; i < 11; ++i) trace.energy[i] = 1.0 + 0.1 * i;
  CHECK_THROWS_AS(integral_inequality_check(trace), std::invalid_argument);
}

TEST_CASE("trace CSV round-trips its values") {
  EnergyTrace trace;
  trace.times = {0.0, 0.1, 0.2};
  trace.energy = {1.0, 1.0 / 3.0, 0.1234567890123456789};
  std::ostringstream os;
  write_trace_csv(os, trace);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,E,E_kappa,logE");
  for (int row = 0; row < 3; ++row) {
    std::string line;
    REQUIRE(std::getline(in, line));
    double t, e, logE;
    char comma;
    std::istringstream ls(line);
    ls >> t >> comma >> e >> comma >> comma >> logE;  // E_kappa empty
    CHECK(t == trace.times[row]);
    CHECK(e == trace.energy[row]);
    CHECK(logE == std::log(trace.energy[row]));
  }
}

TEST_CASE("projection of gridded data inverts the sine synthesis") {
  Lcg64 rng(0xb90c);
  const ModalState state = random_modal_state(rng, 5);
  const GridState grid = grid_from_modes(state, 400);
  const ModalState back =
      project_to_modes(grid.u, grid.u_t, grid.v, grid.v_t, 5);
  for (int k = 0; k < 5; ++k) {
    CHECK((back.modes[k] - state.modes[k]).norm() < 1e-3);
  }
}
