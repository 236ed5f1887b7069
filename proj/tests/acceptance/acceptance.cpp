// Acceptance suite: one PASS/FAIL line per criterion, followed by the numbers
// behind the verdict. Exit status is non-zero when any criterion fails.
//
//   acceptance            run every criterion
//   acceptance 2 5        run only the listed criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polariton/observables.hpp"

using namespace polariton;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("info " + what); }
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

IntegratorConfig horizon(double t_end, double stride = 0.05) {
  IntegratorConfig c;
  c.t_end = t_end;
  c.output_stride = stride;
  return c;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// The reference dynamics (full interaction-picture model with atomic decay,
// default truncation) is shared by several criteria; run it once.
struct ReferenceRun {
  DerivedParams dp;
  Basis basis{Truncation::hard_core(4)};
  Trajectory traj;
  PopulationSeries pops;
};

const ReferenceRun& reference_run() {
  static const ReferenceRun run = [] {
    ReferenceRun r;
    r.dp = derive_params(PhysicalParams::dimensionless_reference());
    const auto h = build_hamiltonian(HamiltonianKind::full, r.dp, r.basis, true);
    r.traj = evolve_schrodinger(h, r.basis.vacuum(), horizon(500.0));
    r.pops = population_series(r.traj, r.basis, r.dp);
    return r;
  }();
  return run;
}

// 1. Feasibility table at the laboratory point, to ±1 in the last displayed digit.
Verdict feasibility_table() {
  Verdict v;
  const auto report =
      feasibility_report(PhysicalParams::laboratory_reference(), 50.0, Units::two_pi_mhz);
  struct Expected {
    const char* key;
    const char* name;
    double published;
    double tolerance;
  };
  const std::vector<Expected> expected{
      {"e1", "E1", 4898.0, 1.0},
      {"lambda", "lambda", 99.8, 0.1},
      {"k0", "K0", 0.09, 0.01},
      {"omega0", "Omega0", 2.8, 0.1},
      {"omega1", "Omega1,2", 70.0, 10.0},  // one significant figure
      {"chi_cos2_half", "chi cos^2/2", 0.08, 0.01},
      {"chi_sincos_sqrt2", "chi sin cos/sqrt2", 2.82, 0.01},
  };
  for (const auto& e : expected) {
    const double value = report.row(e.key).value;
    v.check(std::abs(value - e.published) <= e.tolerance + 1e-12,
            std::string(e.name) + " = " + fmt(value) + " (published " + fmt(e.published) +
                " +/- " + fmt(e.tolerance) + ")");
  }
  v.check(report.derived.omega_drive_2 == report.derived.omega_drive_1, "Omega2 = Omega1");
  const auto& p = report.derived.params;
  v.note("sqrt(N) g = " + fmt(std::sqrt(p.n_atoms) * p.g) + "; exact E1 = sqrt(N) g / sin(theta) = " +
         fmt(report.derived.e1));
  v.note("lambda/K0 = " + fmt(report.lambda_over_k0) + ", rwa_margin = " + fmt(report.derived.rwa_margin));
  return v;
}

// 2. g2(0) at the reference point inside [1e-5, 1e-3].
Verdict g2_reference_point() {
  Verdict v;
  const auto& r = reference_run();
  const double g2 = g2_zero(r.traj, r.basis, 0.5);
  v.check(g2 >= 1e-5 && g2 <= 1e-3, "g2(0) = " + fmt(g2) + " (full model, hard-core pair, n_tot_max 4, window final 50% of t = 500), required [1e-5, 1e-3]");

  // Context: sensitivity to the window and to the model variant.
  for (double w : {0.25, 0.75}) v.note("window " + fmt(w) + ": g2 = " + fmt(g2_zero(r.traj, r.basis, w)));
  const auto eff = build_hamiltonian(HamiltonianKind::eff, r.dp, r.basis, true);
  const auto t_eff = evolve_schrodinger(eff, r.basis.vacuum(), horizon(500.0));
  v.note("eff model: g2 = " + fmt(g2_zero(t_eff, r.basis, 0.5)));
  const Basis bosonic(Truncation::bosonic(4));
  const auto full_b = build_hamiltonian(HamiltonianKind::full, r.dp, bosonic, true);
  const auto t_b = evolve_schrodinger(full_b, bosonic.vacuum(), horizon(500.0));
  v.note("full model, unrestricted pair occupation: g2 = " + fmt(g2_zero(t_b, bosonic, 0.5)));
  return v;
}

// 3. g2(0) strictly increasing over a five-point grid on [0.04, 0.3].
Verdict g2_trend() {
  Verdict v;
  SweepConfig cfg;  // full model with atomic decay, hard-core pair, n_tot_max 4
  cfg.integrator = horizon(500.0);
  const std::vector<double> grid = {0.04, 0.105, 0.17, 0.235, 0.3};
  const SweepResult r = sweep_costheta(PhysicalParams::dimensionless_reference(), grid, cfg);
  std::ostringstream row;
  for (const auto& pt : r.points) row << " " << fmt(pt.grid_value, 4) << ":" << fmt(pt.g2, 4);
  v.check(r.g2_strictly_increasing, "g2 strictly increasing in cos_theta;" + row.str());
  return v;
}

// 4. 0 <= n0 <= 1 + 1e-3 at every output time; Rabi-like period within 20% of pi/Omega0.
Verdict dark_population() {
  Verdict v;
  const auto& r = reference_run();
  const double lo = *std::min_element(r.pops.n0.begin(), r.pops.n0.end());
  const double hi = max_of(r.pops.n0);
  v.check(lo >= 0.0 && hi <= 1.0 + 1e-3,
          "n0 in [" + fmt(lo) + ", " + fmt(hi) + "] over " + std::to_string(r.pops.n0.size()) + " output times");
  const auto period = oscillation_period(r.pops.times, r.pops.n0);
  const double expected = M_PI / r.dp.omega_drive_0;
  v.check(period && std::abs(*period - expected) <= 0.2 * expected,
          "period = " + (period ? fmt(*period) : std::string("none")) + ", pi/Omega0 = " + fmt(expected));
  return v;
}

// 5. Bright populations stay below 1e-3 with gamma_e = kappa; gamma_e = 0 runs and is larger.
Verdict bright_populations() {
  Verdict v;
  const auto& r = reference_run();
  const double n1 = max_of(r.pops.n1), n2 = max_of(r.pops.n2);
  v.check(n1 <= 1e-3 && n2 <= 1e-3,
          "gamma_e = kappa: max n1 = " + fmt(n1) + ", max n2 = " + fmt(n2) + " over all output times (stride 0.05), required <= 1e-3");

  std::size_t settled = 0;
  while (settled < r.pops.times.size() && r.pops.times[settled] < 10.0) ++settled;
  v.note("max n1 for t >= 10 (after the switch-on transient): " +
         fmt(*std::max_element(r.pops.n1.begin() + static_cast<std::ptrdiff_t>(settled), r.pops.n1.end())));
  v.note("switch-on estimate 4 Omega1^2 / E1^2 = " +
         fmt(4.0 * r.dp.omega_drive_1 * r.dp.omega_drive_1 / (r.dp.e1 * r.dp.e1)));

  PhysicalParams p = PhysicalParams::dimensionless_reference();
  p.gamma_e = 0.0;
  const DerivedParams dp = derive_params(p);
  const auto h = build_hamiltonian(HamiltonianKind::full, dp, r.basis, true);
  const auto traj = evolve_schrodinger(h, r.basis.vacuum(), horizon(500.0));
  const auto pops = population_series(traj, r.basis, dp);
  const double z1 = max_of(pops.n1), z2 = max_of(pops.n2);
  v.check(z1 >= n1 && z2 >= n2,
          "gamma_e = 0: max n1 = " + fmt(z1) + ", max n2 = " + fmt(z2) + " (not smaller than gamma_e = kappa)");
  return v;
}

// 6. n0(t) of the full model and the effective blockade model agree within 5%.
Verdict rotating_wave() {
  Verdict v;
  const auto& r = reference_run();
  v.check(r.dp.rwa_margin >= 50.0, "rwa_margin = " + fmt(r.dp.rwa_margin) + " >= 50");
  const auto eff = build_hamiltonian(HamiltonianKind::eff, r.dp, r.basis, true);
  const auto traj = evolve_schrodinger(eff, r.basis.vacuum(), horizon(500.0));
  const auto pops = population_series(traj, r.basis, r.dp);
  double worst = 0.0, worst_t = 0.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < pops.n0.size(); ++i) {
    if (r.pops.n0[i] <= 0.01 && pops.n0[i] <= 0.01) continue;
    const double rel = std::abs(r.pops.n0[i] - pops.n0[i]) / std::max(r.pops.n0[i], pops.n0[i]);
    ++compared;
    if (rel > worst) {
      worst = rel;
      worst_t = pops.times[i];
    }
  }
  v.check(worst <= 0.05, "max relative n0 difference " + fmt(worst) + " at t = " + fmt(worst_t) +
                             " over " + std::to_string(compared) + " points with n0 > 0.01");
  return v;
}

// 7. chi = 0 transmission: peaks at -E1, 0, +E1 within one grid step; narrow centre.
Verdict transmission() {
  Verdict v;
  PhysicalParams p = PhysicalParams::dimensionless_reference();
  p.chi_bar = 0.0;
  p.beta = 0.005;  // weak probe
  const DerivedParams dp = derive_params(p);
  const auto grid = default_spectrum_grid(dp);
  const SweepResult r = transmission_spectrum(p, grid, SpectrumConfig{});
  const auto x = r.grid();
  const auto y = r.column(&SweepPoint::photon_number);
  auto peaks = find_peaks(x, y);
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
  v.note(std::to_string(grid.size()) + " detunings, " + std::to_string(peaks.size()) + " local maxima");
  if (peaks.size() < 3) {
    v.check(false, "fewer than three peaks");
    return v;
  }
  peaks.resize(3);
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.position < b.position; });
  const std::array<double, 3> targets{dp.e2, dp.e0, dp.e1};
  std::array<double, 3> widths{};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t i = peaks[k].index;
    const double step = std::max(x[i] - x[i - 1], x[i + 1] - x[i]);
    v.check(std::abs(peaks[k].position - targets[k]) <= step,
            "peak at " + fmt(peaks[k].position) + " vs resonance " + fmt(targets[k]) + " (grid step " + fmt(step) + ")");
    const auto w = full_width_half_max(x, y, i);
    widths[k] = w.value_or(NAN);
  }
  v.check(widths[1] < widths[0] && widths[1] < widths[2],
          "FWHM centre " + fmt(widths[1]) + " < sides " + fmt(widths[0]) + ", " + fmt(widths[2]));
  v.note("linewidth oracles: K0 + gamma_r = " + fmt(dp.k0 + p.gamma_r) + ", K1 + gamma_e = " + fmt(dp.k1 + p.gamma_e));
  return v;
}

// 8. Weak drive: no-jump normalized steady n0 and g2 within 10% of the master equation.
// Tested at the boundary of the weak-drive range; a ten-times weaker drive is
// reported for context. Two-photon populations are ~1e-16 here, so the integrator
// tolerances are tightened until both methods resolve them.
struct OracleComparison {
  double n_wf, n_me, g_wf, g_me;
};

OracleComparison compare_with_master_equation(double omega_over_k0) {
  PhysicalParams p = PhysicalParams::dimensionless_reference();
  const double k0 = p.kappa * p.cos_theta * p.cos_theta;
  p.beta = omega_over_k0 * k0 / std::sqrt(2.0 * k0);
  const DerivedParams dp = derive_params(p);
  const Basis basis(Truncation::dark_sector(4));
  const auto h = build_hamiltonian(HamiltonianKind::eff, dp, basis, true);
  IntegratorConfig cfg = horizon(20000.0, 1.0);
  cfg.rtol = 1e-11;
  cfg.atol = 1e-20 * std::pow(omega_over_k0 / 0.2, 4);  // two-photon terms scale as Omega0^4

  const auto traj = evolve_schrodinger(h, basis.vacuum(), cfg);
  DensityMatrix rho0 = DensityMatrix::Zero(basis.size(), basis.size());
  rho0(0, 0) = 1.0;
  const auto dens = evolve_lindblad(h, rho0, cfg);

  const std::vector<OperatorMatrix> n0{number_operator(basis, Mode::b0)};
  return {steady_window_stats(traj, n0, 0.5)[0], steady_window_stats(dens, n0, 0.5)[0],
          g2_zero(traj, basis, 0.5), g2_zero(dens, basis, 0.5)};
}

Verdict master_equation_oracle() {
  Verdict v;
  const OracleComparison c = compare_with_master_equation(0.2);
  v.check(std::abs(c.n_wf - c.n_me) <= 0.1 * c.n_me,
          "Omega0 = K0/5: steady n0 no-jump " + fmt(c.n_wf) + " vs master equation " + fmt(c.n_me));
  v.check(std::abs(c.g_wf - c.g_me) <= 0.1 * c.g_me,
          "Omega0 = K0/5: g2(0) no-jump " + fmt(c.g_wf) + " vs master equation " + fmt(c.g_me));
  const OracleComparison weak = compare_with_master_equation(0.02);
  v.note("Omega0 = K0/50: n0 " + fmt(weak.n_wf) + " vs " + fmt(weak.n_me) + ", g2 " + fmt(weak.g_wf) +
         " vs " + fmt(weak.g_me));
  return v;
}

// 9. Property suite.
Verdict properties() {
  Verdict v;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> time(0.0, 500.0);
  const DerivedParams dp = derive_params(PhysicalParams::dimensionless_reference());

  {  // Hermiticity
    double worst = 0.0;
    for (const auto& t : {Truncation::bosonic(4), Truncation::hard_core(6)}) {
      const Basis b(t);
      for (auto kind : {HamiltonianKind::full, HamiltonianKind::rwa, HamiltonianKind::eff, HamiltonianKind::eit}) {
        const auto h = build_hamiltonian(kind, dp, b, true);
        for (int i = 0; i < 25; ++i) {
          const OperatorMatrix hc = h.coherent_part(time(rng));
          const OperatorMatrix diff = hc - OperatorMatrix(hc.adjoint());
          for (int k = 0; k < diff.outerSize(); ++k)
            for (OperatorMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
        }
      }
    }
    v.check(worst < 1e-12, "Hermiticity of H(t) - D: max |H - H^dag| = " + fmt(worst));
  }
  {  // excitation conservation without drive
    PhysicalParams p = PhysicalParams::dimensionless_reference();
    p.beta = 0.0;
    const Basis b(Truncation::bosonic(5));
    const auto h = build_h_int(derive_params(p), b);
    const OperatorMatrix n_tot = total_excitation_operator(b);
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
      const OperatorMatrix hc = h.coherent_part(time(rng));
      const OperatorMatrix comm = OperatorMatrix(hc * n_tot) - OperatorMatrix(n_tot * hc);
      for (int k = 0; k < comm.outerSize(); ++k)
        for (OperatorMatrix::InnerIterator it(comm, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    }
    v.check(worst < 1e-12, "[H, N_tot] = 0 with the drive off: max element " + fmt(worst));
  }
  {  // norm monotonicity
    const auto& r = reference_run();
    bool monotone = true;
    for (std::size_t i = 1; i < r.traj.size(); ++i) monotone = monotone && r.traj.log_norm_sq[i] <= r.traj.log_norm_sq[i - 1] + 1e-12;
    v.check(monotone, "norm non-increasing between all adjacent outputs of the reference run");
  }
  {  // coherent statistics at zero nonlinearity
    PhysicalParams p = PhysicalParams::dimensionless_reference();
    p.chi_bar = 0.0;
    p.cos_theta = 0.5;
    p.beta = 0.02;
    const DerivedParams lin = derive_params(p);
    Truncation t{12, {}};
    t.mode_caps = {std::nullopt, 0, 0, 0};
    const Basis b(t);
    const auto traj = evolve_schrodinger(build_hamiltonian(HamiltonianKind::eff, lin, b, true), b.vacuum(), horizon(300.0, 0.5));
    const double g2 = g2_zero(traj, b, 0.5);
    v.check(std::abs(g2 - 1.0) <= 0.05, "lambda = 0 coherent drive: g2 = " + fmt(g2));
  }
  {  // hard cap
    Truncation t = Truncation::hard_core(4);
    t.mode_caps[0] = 1;
    const Basis b(t);
    const auto traj = evolve_schrodinger(build_hamiltonian(HamiltonianKind::full, dp, b, true), b.vacuum(), horizon(100.0));
    const double g2 = g2_zero(traj, b, 0.5);
    v.check(g2 == 0.0, "basis capped at n0 <= 1: g2 = " + fmt(g2));
  }
  {  // truncation convergence
    const auto& r = reference_run();
    const double g4 = g2_zero(r.traj, r.basis, 0.5);
    const Basis b6(Truncation::hard_core(6));
    const auto traj6 = evolve_schrodinger(build_hamiltonian(HamiltonianKind::full, dp, b6, true), b6.vacuum(), horizon(500.0));
    const double g6 = g2_zero(traj6, b6, 0.5);
    v.check(std::abs(g6 - g4) <= 0.01 * std::abs(g6),
            "truncation 4 -> 6 (hard-core pair): g2 " + fmt(g4) + " -> " + fmt(g6) +
                " (relative change " + fmt(std::abs(g6 - g4) / std::abs(g6)) + ")");
  }
  {  // single-excitation eigensystem
    double worst = 0.0;
    for (double c : {0.04, 0.1, 0.3, 0.6}) {
      PhysicalParams p = PhysicalParams::dimensionless_reference();
      p.cos_theta = c;
      const DerivedParams d = derive_params(p);
      const auto sys = single_excitation_h1(d);
      worst = std::max({worst, std::abs(sys.eigenvalues(0) - d.e2) / d.e1, std::abs(sys.eigenvalues(1)) / d.e1,
                        std::abs(sys.eigenvalues(2) - d.e1) / d.e1});
    }
    v.check(worst <= 1e-10, "single-excitation eigenvalues vs derived energies: max relative error " + fmt(worst));
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"feasibility table at the laboratory point", feasibility_table},
      {"g2(0) at the reference point in [1e-5, 1e-3]", g2_reference_point},
      {"g2(0) increases with cos_theta", g2_trend},
      {"dark population bounded by one, Rabi-like period", dark_population},
      {"bright populations below 1e-3", bright_populations},
      {"full and effective models agree on n0(t)", rotating_wave},
      {"three-peak transmission spectrum", transmission},
      {"no-jump evolution matches the master equation at weak drive", master_equation_oracle},
      {"property suite", properties},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << criteria[k].first << "  ["
              << fmt(seconds, 3) << " s]\n";
    for (const auto& d : v.details) std::cout << "        " << d << '\n';
    std::cout.flush();
    if (!v.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
