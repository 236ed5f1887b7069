#include "polariton/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace polariton {

Complex expectation(const OperatorMatrix& op, const StateVector& psi) {
  if (op.cols() != psi.size()) throw std::invalid_argument("operator and state dimensions differ");
  const double norm = psi.squaredNorm();
  if (!(norm > 0.0)) throw std::domain_error("expectation value of a zero-norm state");
  return psi.dot(op * psi) / norm;
}

OperatorMatrix photon_annihilator(const Basis& basis, const DerivedParams& dp, double t) {
  const Complex bright_phase = std::exp(Complex(0.0, -dp.e1 * t));
  const double bright = dp.sin_theta / std::sqrt(2.0);
  OperatorMatrix a = Complex(dp.cos_theta) * annihilator(basis, Mode::b0);
  a += (bright * bright_phase) * annihilator(basis, Mode::b1);
  a += (bright * std::conj(bright_phase)) * annihilator(basis, Mode::b2);
  a.prune(Complex(0.0));
  return a;
}

OperatorMatrix photon_number_operator(const Basis& basis, const DerivedParams& dp, double t) {
  const OperatorMatrix a = photon_annihilator(basis, dp, t);
  OperatorMatrix a_dag = a.adjoint();
  OperatorMatrix n = a_dag * a;
  n.prune(Complex(0.0));
  return n;
}

OperatorMatrix pair_correlation_operator(const Basis& basis) {
  const OperatorMatrix b = annihilator(basis, Mode::b0);
  const OperatorMatrix b_dag = creator(basis, Mode::b0);
  OperatorMatrix bb = b * b;
  OperatorMatrix out = b_dag * OperatorMatrix(b_dag * bb);
  out.prune(Complex(0.0));
  return out;
}

namespace {

double ratio_or_nan(double numerator, double mean_population) {
  if (!(mean_population > 1e-300) || !std::isfinite(mean_population)) return kNaN;
  return numerator / (mean_population * mean_population);
}

}  // namespace

double g2_zero(const Trajectory& traj, const Basis& basis, double window_fraction) {
  const std::vector<OperatorMatrix> ops{pair_correlation_operator(basis),
                                        number_operator(basis, Mode::b0)};
  const auto means = steady_window_stats(traj, ops, window_fraction);
  return ratio_or_nan(means[0], means[1]);
}

double g2_zero(const DensityTrajectory& traj, const Basis& basis, double window_fraction) {
  const std::vector<OperatorMatrix> ops{pair_correlation_operator(basis),
                                        number_operator(basis, Mode::b0)};
  const auto means = steady_window_stats(traj, ops, window_fraction);
  return ratio_or_nan(means[0], means[1]);
}

PopulationSeries population_series(const Trajectory& traj, const Basis& basis,
                                   const DerivedParams& dp) {
  PopulationSeries s;
  s.times = traj.times;
  s.norm_sq = traj.norm_sq;
  const std::size_t n = traj.size();
  s.n0.resize(n);
  s.n1.resize(n);
  s.n2.resize(n);
  s.np.resize(n);
  s.photon.resize(n);

  // Occupations are diagonal: read them straight off |c_i|².
  const auto dim = basis.size();
  std::vector<std::array<int, 4>> occ(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (Mode m : kAllModes) occ[i][static_cast<int>(m)] = basis.state(i).occupation(m);
  }
  const OperatorMatrix b0 = annihilator(basis, Mode::b0);
  const OperatorMatrix b1 = annihilator(basis, Mode::b1);
  const OperatorMatrix b2 = annihilator(basis, Mode::b2);
  const double bright = dp.sin_theta / std::sqrt(2.0);

  for (std::size_t k = 0; k < n; ++k) {
    const StateVector& psi = traj.states[k];
    const double norm = psi.squaredNorm();
    std::array<double, 4> acc{};
    for (std::size_t i = 0; i < dim; ++i) {
      const double w = std::norm(psi(static_cast<Eigen::Index>(i)));
      for (int m = 0; m < 4; ++m) acc[m] += w * occ[i][m];
    }
    s.n0[k] = acc[0] / norm;
    s.n1[k] = acc[1] / norm;
    s.n2[k] = acc[2] / norm;
    s.np[k] = acc[3] / norm;

    const Complex phase = std::exp(Complex(0.0, -dp.e1 * traj.times[k]));
    const StateVector a_psi = Complex(dp.cos_theta) * (b0 * psi) +
                              (bright * phase) * (b1 * psi) +
                              (bright * std::conj(phase)) * (b2 * psi);
    s.photon[k] = a_psi.squaredNorm() / norm;
  }
  return s;
}

std::vector<double> SweepResult::grid() const { return column(&SweepPoint::grid_value); }

std::vector<double> SweepResult::column(double SweepPoint::*field) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.*field);
  return out;
}

bool strictly_increasing(std::span<const double> values) {
  if (values.size() < 2) return true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) return false;
  }
  return true;
}

SweepResult sweep_costheta(const PhysicalParams& p, std::span<const double> grid,
                           const SweepConfig& cfg) {
  for (double c : grid) {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("cos_theta grid values must lie in (0, 1)");
  }
  cfg.integrator.validate();
  const Basis basis(cfg.truncation);

  SweepResult result;
  result.grid_name = "cos_theta";
  result.points.resize(grid.size());

  for_each_index(grid.size(), cfg.execution, [&](std::size_t i) {
    PhysicalParams point = p;
    point.cos_theta = grid[i];
    const DerivedParams dp = derive_params(point);
    const HamiltonianTerms h = build_hamiltonian(cfg.kind, dp, basis, cfg.atomic_decay);
    const Trajectory traj = evolve_schrodinger(h, basis.vacuum(), cfg.integrator);
    const PopulationSeries pops = population_series(traj, basis, dp);

    SweepPoint& out = result.points[i];
    out.grid_value = grid[i];
    out.g2 = g2_zero(traj, basis, cfg.window_fraction);
    out.n0_mean = window_average(pops.times, pops.n0, cfg.window_fraction);
    out.n1_max = *std::max_element(pops.n1.begin(), pops.n1.end());
    out.n2_max = *std::max_element(pops.n2.begin(), pops.n2.end());
    out.photon_number = window_average(pops.times, pops.photon, cfg.window_fraction);
    out.truncation = cfg.truncation.n_tot_max;
    out.window = cfg.window_fraction;
    out.t_end = cfg.integrator.t_end;
  });

  result.g2_strictly_increasing = strictly_increasing(result.column(&SweepPoint::g2));
  return result;
}

double settle_time(const DerivedParams& dp, const std::array<double, 3>& widths, double delta,
                   const SpectrumConfig& cfg) {
  // Weak-drive Lorentzian response of each polariton, weighted by its photon
  // content: cos²θ for the dark mode, sin²θ/2 for each bright mode.
  const std::array<double, 3> energies{dp.e0, dp.e1, dp.e2};
  const std::array<double, 3> drives{dp.omega_drive_0, dp.omega_drive_1, dp.omega_drive_2};
  const double bright_weight = 0.5 * dp.sin_theta * dp.sin_theta;
  const std::array<double, 3> photon_weight{dp.cos_theta * dp.cos_theta, bright_weight,
                                            bright_weight};
  std::array<double, 3> response{};
  double total = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double detuning = delta - energies[k];
    const double denom = detuning * detuning + 0.25 * widths[k] * widths[k];
    response[k] = denom > 0.0 ? photon_weight[k] * drives[k] * drives[k] / denom : 0.0;
    total += response[k];
  }
  double slowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < 3; ++k) {
    if (total > 0.0 && response[k] >= cfg.settle_weight * total) slowest = std::min(slowest, widths[k]);
  }
  if (!std::isfinite(slowest)) slowest = *std::min_element(widths.begin(), widths.end());
  if (!(slowest > 0.0)) return cfg.horizon;
  return std::min(cfg.settle_factor / slowest, cfg.horizon);
}

SweepResult transmission_spectrum(const PhysicalParams& p, std::span<const double> delta_grid,
                                  const SpectrumConfig& cfg, std::vector<std::string>* warnings) {
  if (delta_grid.empty()) throw std::invalid_argument("empty detuning grid");
  const DerivedParams base = derive_params(p);
  if (p.chi_bar != 0.0 && warnings != nullptr) {
    warnings->push_back("transmission spectrum ignores chi_bar: blockade-free Hamiltonian used");
  }
  const Basis basis(cfg.truncation);
  const std::array<double, 3> widths{
      base.k0 + (cfg.atomic_decay ? p.gamma_r : 0.0),
      base.k1 + (cfg.atomic_decay ? p.gamma_e : 0.0),
      base.k2 + (cfg.atomic_decay ? p.gamma_e : 0.0),
  };

  SweepResult result;
  result.grid_name = "delta";
  result.points.resize(delta_grid.size());

  for_each_index(delta_grid.size(), cfg.execution, [&](std::size_t i) {
    PhysicalParams point = p;
    point.delta = delta_grid[i];
    const DerivedParams dp = derive_params(point);
    HamiltonianTerms h = build_h_eit(dp, basis);
    if (cfg.atomic_decay) h = add_atomic_decay(std::move(h), dp);

    IntegratorConfig ic = cfg.integrator;
    ic.t_start = 0.0;
    ic.t_end = settle_time(dp, widths, point.delta, cfg);
    ic.output_stride = std::min(ic.output_stride, ic.t_end / 200.0);
    const Trajectory traj = evolve_schrodinger(h, basis.vacuum(), ic);
    const PopulationSeries pops = population_series(traj, basis, dp);

    SweepPoint& out = result.points[i];
    out.grid_value = point.delta;
    out.photon_number = window_average(pops.times, pops.photon, cfg.window_fraction);
    out.n0_mean = window_average(pops.times, pops.n0, cfg.window_fraction);
    out.n1_max = *std::max_element(pops.n1.begin(), pops.n1.end());
    out.n2_max = *std::max_element(pops.n2.begin(), pops.n2.end());
    out.truncation = cfg.truncation.n_tot_max;
    out.window = cfg.window_fraction;
    out.t_end = ic.t_end;
  });

  if (warnings != nullptr) {
    const auto [lo, hi] = std::minmax_element(delta_grid.begin(), delta_grid.end());
    bool covered = false;
    for (double e : {base.e0, base.e1, base.e2}) covered = covered || (e >= *lo && e <= *hi);
    if (!covered) warnings->push_back("detuning grid covers no polariton resonance");
  }
  return result;
}

std::vector<double> default_spectrum_grid(const DerivedParams& dp, bool atomic_decay,
                                          std::size_t coarse_points, std::size_t fine_points) {
  const auto& p = dp.params;
  const double w0 = dp.k0 + (atomic_decay ? p.gamma_r : 0.0);
  const double w1 = dp.k1 + (atomic_decay ? p.gamma_e : 0.0);
  const double reach = 1.5 * std::max(std::abs(dp.e1), std::abs(dp.e2));

  std::vector<double> grid;
  auto add_linear = [&](double a, double b, std::size_t n) {
    if (n == 1) {
      grid.push_back(0.5 * (a + b));
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      grid.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  };
  add_linear(-reach, reach, coarse_points);
  if (w0 > 0.0) add_linear(dp.e0 - 4.0 * w0, dp.e0 + 4.0 * w0, fine_points);
  if (w1 > 0.0) {
    add_linear(dp.e1 - 4.0 * w1, dp.e1 + 4.0 * w1, fine_points);
    add_linear(dp.e2 - 4.0 * w1, dp.e2 + 4.0 * w1, fine_points);
  }
  std::sort(grid.begin(), grid.end());
  const double tol = 1e-12 * std::max(1.0, reach);
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [tol](double a, double b) { return std::abs(a - b) <= tol; }),
             grid.end());
  return grid;
}

std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y,
                             double min_relative_height) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
  std::vector<Peak> peaks;
  if (y.size() < 3) return peaks;
  const double top = *std::max_element(y.begin(), y.end());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    if (y[i] < min_relative_height * top) continue;
    // Parabola through three (possibly unevenly spaced) samples.
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curvature = (d12 - d01) / (x2 - x0);
    double position = x1;
    double height = y1;
    if (curvature < 0.0) {
      position = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
      position = std::clamp(position, x0, x2);
      height = y1 + d01 * (position - x1) + curvature * (position - x0) * (position - x1);
    }
    peaks.push_back({i, position, height});
  }
  return peaks;
}

std::optional<double> full_width_half_max(std::span<const double> x, std::span<const double> y,
                                          std::size_t peak_index) {
  if (x.size() != y.size() || peak_index >= y.size()) {
    throw std::invalid_argument("bad peak index or mismatched arrays");
  }
  const double half = 0.5 * y[peak_index];
  std::optional<double> left, right;
  for (std::size_t i = peak_index; i > 0; --i) {
    if (y[i - 1] <= half) {
      const double f = (half - y[i - 1]) / (y[i] - y[i - 1]);
      left = x[i - 1] + f * (x[i] - x[i - 1]);
      break;
    }
  }
  for (std::size_t i = peak_index; i + 1 < y.size(); ++i) {
    if (y[i + 1] <= half) {
      const double f = (y[i] - half) / (y[i] - y[i + 1]);
      right = x[i] + f * (x[i + 1] - x[i]);
      break;
    }
  }
  if (!left || !right) return std::nullopt;
  return *right - *left;
}

std::optional<double> oscillation_period(std::span<const double> times,
                                         std::span<const double> values) {
  if (times.size() != values.size() || times.size() < 4) return std::nullopt;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  std::vector<double> upward;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double a = values[i - 1] - mean;
    const double b = values[i] - mean;
    if (a < 0.0 && b >= 0.0) {
      upward.push_back(times[i - 1] + (times[i] - times[i - 1]) * (-a) / (b - a));
    }
  }
  if (upward.size() < 2) return std::nullopt;
  return (upward.back() - upward.front()) / static_cast<double>(upward.size() - 1);
}

}  // namespace polariton
