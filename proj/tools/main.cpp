// Command-line front end: stability classification, spectrum dumps, exact
// modal simulation with decay fitting, resolvent sweeps, and brute-force
// cross-checks.
//
// Exit codes: 0 success (classify/resolvent: stable), 1 usage or input
// error, 2 unstable system (classify/resolvent), 3 oracle tolerance breach,
// 4 inconclusive resolvent verdict.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcwave/coeffs.hpp"
#include "vcwave/modal_sim.hpp"
#include "vcwave/modal_state.hpp"
#include "vcwave/oracle.hpp"
#include "vcwave/resolvent.hpp"
#include "vcwave/rng.hpp"
#include "vcwave/spectrum.hpp"

namespace {

namespace fs = std::filesystem;
using namespace vcwave;

struct SystemOptions {
  std::vector<double> raw;       // --alpha --beta --gamma --eta
  std::string form_kind;         // "rotation" | "triangular"
  double a = 0.0, b = 0.0, c = 0.0;
  int count_raw = 0;
  int count_form = 0;
};

struct GlobalOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  int modes = 64;
  bool quiet = false;
};

void add_system_options(CLI::App* cmd, SystemOptions& sys) {
  cmd->fallthrough();  // global options may follow the subcommand
  auto raw = [&sys](int slot) {
    return [&sys, slot](double v) {
      if (sys.raw.empty()) sys.raw.assign(4, 0.0);
      sys.raw[slot] = v;
      ++sys.count_raw;
    };
  };
  cmd->add_option_function<double>("--alpha", raw(0), "coupling entry alpha");
  cmd->add_option_function<double>("--beta", raw(1), "coupling entry beta");
  cmd->add_option_function<double>("--gamma", raw(2), "coupling entry gamma");
  cmd->add_option_function<double>("--eta", raw(3), "coupling entry eta");
  cmd->add_option("--form", sys.form_kind,
                  "canonical form kind: rotation or triangular")
      ->check(CLI::IsMember({"rotation", "triangular"}));
  cmd->add_option_function<double>(
      "--a", [&sys](double v) { sys.a = v; ++sys.count_form; },
      "canonical parameter a");
  cmd->add_option_function<double>(
      "--b", [&sys](double v) { sys.b = v; ++sys.count_form; },
      "canonical parameter b");
  cmd->add_option_function<double>(
      "--c", [&sys](double v) { sys.c = v; ++sys.count_form; },
      "canonical parameter c (triangular only)");
}

// Resolves the system specification to a canonical form plus the coupling
// matrix actually simulated (the raw matrix when given, otherwise the
// canonical one).
struct ResolvedSystem {
  CoeffMatrix coeffs;
  CanonicalForm form;
  bool from_raw = false;
};

ResolvedSystem resolve_system(const SystemOptions& sys) {
  const bool has_raw = sys.count_raw > 0;
  const bool has_form = !sys.form_kind.empty() || sys.count_form > 0;
  if (has_raw && has_form) {
    throw std::invalid_argument(
        "give either raw coefficients (--alpha/--beta/--gamma/--eta) or a "
        "canonical form (--form/--a/--b/--c), not both");
  }
  if (has_raw) {
    if (sys.count_raw != 4) {
      throw std::invalid_argument(
          "raw coefficients need all of --alpha, --beta, --gamma, --eta");
    }
    ResolvedSystem r;
    r.coeffs = {sys.raw[0], sys.raw[1], sys.raw[2], sys.raw[3]};
    r.form = schur_canonicalize(r.coeffs);
    r.from_raw = true;
    return r;
  }
  if (!has_form) {
    throw std::invalid_argument(
        "missing system: give --alpha/--beta/--gamma/--eta or --form with "
        "--a/--b/--c");
  }
  if (sys.form_kind.empty()) {
    throw std::invalid_argument("missing --form (rotation or triangular)");
  }
  ResolvedSystem r;
  if (sys.form_kind == "rotation") {
    if (sys.b == 0.0) {
      throw std::invalid_argument("--form rotation requires --b != 0");
    }
    r.form.kind = CanonicalKind::Rotation;
    r.form.a = sys.a;
    r.form.b = sys.b;
  } else {
    r.form.kind = CanonicalKind::Triangular;
    r.form.a = sys.a;
    r.form.b = sys.b;
    r.form.c = sys.c;
  }
  r.coeffs = r.form.coeffs();
  return r;
}

std::string describe_form(const CanonicalForm& form) {
  std::ostringstream os;
  if (form.kind == CanonicalKind::Rotation) {
    os << "Rotation(a=" << form.a << ", b=" << form.b << ")";
  } else {
    os << "Triangular(a=" << form.a << ", b=" << form.b << ", c=" << form.c
       << ")";
  }
  return os.str();
}

ModalState load_initial_state(const std::string& spec, std::uint64_t seed,
                              int modes) {
  if (spec == "random") {
    Lcg64 rng(seed);
    return random_modal_state(rng, modes);
  }
  if (spec.starts_with("coeffs:")) {
    std::ifstream in(spec.substr(7));
    if (!in) throw std::invalid_argument("cannot open " + spec.substr(7));
    ModalState state;
    state.modes.assign(modes, Eigen::Vector4d::Zero());
    int n;
    double u, y, v, z;
    while (in >> n >> u >> y >> v >> z) {
      if (n < 1 || n > modes) {
        throw std::invalid_argument("mode index out of range in " + spec);
      }
      state.modes[n - 1] = Eigen::Vector4d(u, y, v, z);
    }
    return state;
  }
  if (spec.starts_with("grid:")) {
    std::ifstream in(spec.substr(5));
    if (!in) throw std::invalid_argument("cannot open " + spec.substr(5));
    std::vector<double> u, ut, v, vt;
    double a, b, c, d;
    while (in >> a >> b >> c >> d) {
      u.push_back(a);
      ut.push_back(b);
      v.push_back(c);
      vt.push_back(d);
    }
    return project_to_modes(u, ut, v, vt, modes);
  }
  throw std::invalid_argument(
      "--init must be 'random', 'coeffs:<path>' or 'grid:<path>'");
}

std::vector<double> uniform_times(double t_end, int samples) {
  if (samples < 2) throw std::invalid_argument("--samples must be >= 2");
  if (!(t_end > 0.0)) throw std::invalid_argument("--t-end must be positive");
  std::vector<double> times(samples);
  for (int i = 0; i < samples; ++i) {
    times[i] = t_end * static_cast<double>(i) / (samples - 1);
  }
  return times;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

int run_classify(const ResolvedSystem& sys, const GlobalOptions& glob) {
  const StabilityVerdict verdict = classify_stability(sys.coeffs);
  if (!glob.quiet) {
    std::printf("%s, form=%s, trace=%.17g, det=%.17g\n",
                verdict.stable ? "STABLE" : "UNSTABLE",
                describe_form(sys.form).c_str(), verdict.trace, verdict.det);
    if (verdict.stable) {
      const DecayPrediction pred = decay_prediction(sys.form, glob.modes);
      std::printf(
          "omega=%.17g, p=%d, dominant_mode=%d, dominant_eigenvalue=%.17g%+.17gi\n",
          pred.omega, pred.p, pred.dominant_mode,
          pred.dominant_eigenvalue.real(), pred.dominant_eigenvalue.imag());
    }
  }
  return verdict.stable ? 0 : 2;
}

int run_spectrum(const ResolvedSystem& sys, const GlobalOptions& glob) {
  const fs::path out = fs::path(glob.out_dir) / "spectrum.json";
  write_file(out, spectrum_to_json(sys.form, glob.modes));
  if (!glob.quiet) {
    std::printf("wrote %s (%d modes, case %s)\n", out.string().c_str(),
                glob.modes,
                to_string(mode_structure(sys.form, 1).tag).c_str());
  }
  return 0;
}

struct SimulateOptions {
  double t_end = 50.0;
  int samples = 2001;
  std::string init = "random";
  bool weighted = false;
  double kappa_override = 0.0;
};

int run_simulate(const ResolvedSystem& sys, const GlobalOptions& glob,
                 const SimulateOptions& opt) {
  const ModalState init = load_initial_state(opt.init, glob.seed, glob.modes);
  const std::vector<double> times = uniform_times(opt.t_end, opt.samples);

  std::optional<double> kappa;
  if (opt.kappa_override > 0.0) {
    kappa = opt.kappa_override;
  } else if (opt.weighted) {
    if (sys.form.kind != CanonicalKind::Triangular || !(sys.form.a > 0.0) ||
        !(sys.form.c > 0.0)) {
      throw std::invalid_argument(
          "--weighted requires a stable triangular form (or give --kappa)");
    }
    kappa = choose_kappa(sys.form.a, sys.form.b, sys.form.c);
  }

  // Simulate the raw matrix when one was given; energies agree with the
  // canonical system exactly when the input was already canonical.
  const EnergyTrace trace = simulate(sys.coeffs, init, times, kappa);

  const fs::path out = fs::path(glob.out_dir) / "trace.csv";
  {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + out.string());
    write_trace_csv(os, trace);
  }

  const StabilityVerdict verdict = classify_stability(sys.coeffs);
  if (!verdict.stable) {
    if (!glob.quiet) {
      std::printf("wrote %s; system UNSTABLE, no decay fit\n",
                  out.string().c_str());
    }
    return 0;
  }
  const DecayPrediction pred = decay_prediction(sys.form, glob.modes);
  const FitReport fit = fit_decay(trace, pred);
  if (!glob.quiet) {
    std::printf("wrote %s\n", out.string().c_str());
    std::printf(
        "predicted omega=%.17g p=%d; fitted omega_hat=%.17g p_hat=%.17g "
        "rel_err=%.3g\n",
        pred.omega, pred.p, fit.omega_hat, fit.p_hat, fit.rel_err_omega);
  }
  return 0;
}

struct ResolventOptions {
  double xi_max = 80.0;
  double grid_step = 0.01;
  int n_max = 0;  // 0: derive 2*xi_max + 16
};

int run_resolvent(const ResolvedSystem& sys, const GlobalOptions& glob,
                  const ResolventOptions& opt) {
  const int n_max = opt.n_max > 0
                        ? opt.n_max
                        : static_cast<int>(2.0 * opt.xi_max) + 16;
  const ResolventSweep sweep =
      resolvent_sup(sys.form, opt.xi_max, opt.grid_step, n_max);
  const fs::path out = fs::path(glob.out_dir) / "sweep.csv";
  {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + out.string());
    write_sweep_csv(os, sweep);
  }
  const ResolventResult result =
      stability_via_resolvent(sys.form, opt.xi_max, n_max, opt.grid_step);
  if (!glob.quiet) {
    std::printf("wrote %s\n", out.string().c_str());
    std::printf("verdict=%s sup_norm=%.17g argmax_xi=%.17g tail_bound=%.17g\n",
                to_string(result.verdict).c_str(), result.sup_norm,
                result.argmax_xi, result.axis.tail_bound);
  }
  switch (result.verdict) {
    case ResolventVerdict::Stable: return 0;
    case ResolventVerdict::Unstable: return 2;
    case ResolventVerdict::Inconclusive: return 4;
  }
  return 1;
}

struct OracleOptions {
  double perturb_eigenvalue = 0.0;
};

int run_oracle(const ResolvedSystem& sys, const GlobalOptions& glob,
               const OracleOptions& opt) {
  struct Check {
    std::string name;
    double worst = 0.0;
    double tol = 0.0;
    bool pass = true;
  };
  std::vector<Check> checks;

  {
    Check c{"closed-form eigenvalues vs Durand-Kerner", 0.0, 1e-8, true};
    const int n_hi = std::min(glob.modes, 50);
    for (int n = 1; n <= n_hi; ++n) {
      auto eigs = sys.form.kind == CanonicalKind::Rotation
                      ? eigenvalues_case_i(sys.form.a, sys.form.b, n)
                      : eigenvalues_case_ii(sys.form.a, sys.form.c, n);
      if (n == 1 && opt.perturb_eigenvalue != 0.0) {
        eigs[0] += opt.perturb_eigenvalue;  // fault-injection test hook
      }
      const auto roots = poly_roots(characteristic_quartic(sys.form, n));
      // Greedy minimal-distance pairing over the 4x4 distance table.
      std::array<bool, 4> used{};
      for (const Complex& lam : eigs) {
        double best = std::numeric_limits<double>::infinity();
        int best_j = -1;
        for (int j = 0; j < 4; ++j) {
          if (used[j]) continue;
          const double d = std::abs(lam - roots[j]);
          if (d < best) {
            best = d;
            best_j = j;
          }
        }
        used[best_j] = true;
        c.worst = std::max(c.worst, best / std::max(1.0, std::abs(lam)));
      }
    }
    c.pass = c.worst <= c.tol;
    checks.push_back(c);
  }

  {
    Check c{"matrix exponential vs RK4", 0.0, 1e-8, true};
    Lcg64 rng(glob.seed);
    for (int n = 1; n <= std::min(glob.modes, 8); ++n) {
      const ModeBlock block = mode_block(sys.form, n);
      Eigen::Vector4d state(rng.uniform(-1, 1), rng.uniform(-1, 1),
                            rng.uniform(-1, 1), rng.uniform(-1, 1));
      const Eigen::Vector4d exact = evolve_mode(block, state, 1.0);
      const Eigen::Vector4d approx = rk4_integrate(block, state, 1.0, 1e-4);
      c.worst = std::max(
          c.worst, (exact - approx).norm() / std::max(1.0, exact.norm()));
    }
    c.pass = c.worst <= c.tol;
    checks.push_back(c);
  }

  {
    Check c{"modal energy vs finite-difference leapfrog", 0.0, 0.01, true};
    ModalState single;
    single.modes.assign(1, Eigen::Vector4d(1.0, 0.0, 0.0, 0.0));
    const int grid_points = 400;
    const GridState grid = grid_from_modes(single, grid_points);
    const double dx = grid.dx();
    const double spacing = 0.5;
    const int per_sample = static_cast<int>(std::ceil(spacing / (0.9 * dx)));
    const double dt = spacing / per_sample;
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) times.push_back(k * spacing);
    const FdTrace fd = fd_leapfrog(sys.coeffs, grid, times.back(), dt, times);
    const EnergyTrace modal = simulate(sys.coeffs, single, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      c.worst = std::max(c.worst, std::abs(fd.energy[k] - modal.energy[k]) /
                                      modal.energy[k]);
    }
    c.pass = c.worst <= c.tol;
    checks.push_back(c);
  }

  bool all_pass = true;
  for (const Check& c : checks) {
    all_pass = all_pass && c.pass;
    if (!glob.quiet || !c.pass) {
      std::printf("[%s] %s: worst=%.3g tol=%.3g\n", c.pass ? "PASS" : "FAIL",
                  c.name.c_str(), c.worst, c.tol);
    }
  }
  if (!glob.quiet) {
    std::printf("%s\n", all_pass ? "ALL CHECKS PASS" : "CHECK FAILURE");
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"velocity-coupled wave system: stability, spectra, decay"};
  app.require_subcommand(1);

  GlobalOptions glob;
  app.add_option("--out", glob.out_dir, "output directory");
  app.add_option("--seed", glob.seed, "seed for random initial data");
  app.add_option("--modes", glob.modes, "number of sine modes")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", glob.quiet, "suppress progress output");
  app.set_config("--config", "", "flat key=value configuration file");

  SystemOptions sys_classify, sys_spectrum, sys_simulate, sys_resolvent,
      sys_oracle;
  SimulateOptions sim_opt;
  ResolventOptions res_opt;
  OracleOptions ora_opt;

  CLI::App* classify = app.add_subcommand("classify", "stability verdict");
  add_system_options(classify, sys_classify);

  CLI::App* spectrum = app.add_subcommand("spectrum", "per-mode spectrum dump");
  add_system_options(spectrum, sys_spectrum);

  CLI::App* simulate = app.add_subcommand("simulate", "exact modal simulation");
  add_system_options(simulate, sys_simulate);
  simulate->add_option("--t-end", sim_opt.t_end, "final time");
  simulate->add_option("--samples", sim_opt.samples, "number of samples");
  simulate->add_option("--init", sim_opt.init,
                       "random | coeffs:<path> | grid:<path>");
  simulate->add_flag("--weighted", sim_opt.weighted,
                     "also record the weighted energy E_kappa");
  simulate->add_option("--kappa", sim_opt.kappa_override,
                       "explicit weight for E_kappa");

  CLI::App* resolvent = app.add_subcommand("resolvent", "imaginary-axis sweep");
  add_system_options(resolvent, sys_resolvent);
  resolvent->add_option("--xi-max", res_opt.xi_max, "sweep half-width");
  resolvent->add_option("--grid-step", res_opt.grid_step, "frequency step");
  resolvent->add_option("--nmax", res_opt.n_max,
                        "mode truncation (default 2 xi_max + 16)");

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force cross-checks");
  add_system_options(oracle, sys_oracle);
  oracle
      ->add_option("--perturb-eigenvalue", ora_opt.perturb_eigenvalue,
                   "fault-injection hook: offset one eigenvalue")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // any malformed invocation exits 1
  }

  try {
    std::filesystem::create_directories(glob.out_dir);
    if (classify->parsed()) {
      return run_classify(resolve_system(sys_classify), glob);
    }
    if (spectrum->parsed()) {
      return run_spectrum(resolve_system(sys_spectrum), glob);
    }
    if (simulate->parsed()) {
      return run_simulate(resolve_system(sys_simulate), glob, sim_opt);
    }
    if (resolvent->parsed()) {
      return run_resolvent(resolve_system(sys_resolvent), glob, res_opt);
    }
    if (oracle->parsed()) {
      return run_oracle(resolve_system(sys_oracle), glob, ora_opt);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
