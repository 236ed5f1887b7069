#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polariton/dynamics.hpp"

namespace polariton {

/// ⟨ψ|O|ψ⟩ / ⟨ψ|ψ⟩. Throws std::domain_error for a zero-norm state.
[[nodiscard]] Complex expectation(const OperatorMatrix& op, const StateVector& psi);

/// Cavity photon annihilator rebuilt from the polaritons,
/// a = cosθ b0 + sinθ (b1 + b2)/√2, carried into the interaction picture:
/// b1 and b2 pick up e^{-iE1 t} and e^{+iE1 t}. t = 0 gives the bare
/// reconstruction.
[[nodiscard]] OperatorMatrix photon_annihilator(const Basis& basis, const DerivedParams& dp,
                                                double t = 0.0);
[[nodiscard]] OperatorMatrix photon_number_operator(const Basis& basis, const DerivedParams& dp,
                                                    double t = 0.0);

/// b0† b0† b0 b0
[[nodiscard]] OperatorMatrix pair_correlation_operator(const Basis& basis);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Equal-time g2 of the dark polariton: window average of ⟨b0†b0†b0b0⟩ over
/// the squared window average of ⟨b0†b0⟩, both on normalized states. Returns
/// NaN when the mean population vanishes.
[[nodiscard]] double g2_zero(const Trajectory& traj, const Basis& basis,
                             double window_fraction = 0.5);
[[nodiscard]] double g2_zero(const DensityTrajectory& traj, const Basis& basis,
                             double window_fraction = 0.5);

struct PopulationSeries {
  std::vector<double> times;
  std::vector<double> norm_sq;
  std::vector<double> n0, n1, n2, np;
  std::vector<double> photon;
};

[[nodiscard]] PopulationSeries population_series(const Trajectory& traj, const Basis& basis,
                                                 const DerivedParams& dp);

struct SweepPoint {
  double grid_value = 0.0;
  double g2 = kNaN;
  double n0_mean = kNaN;
  double n1_max = kNaN;
  double n2_max = kNaN;
  double photon_number = kNaN;
  int truncation = 0;
  double window = 0.0;
  double t_end = 0.0;  // integration horizon actually used
};

struct SweepResult {
  std::string grid_name;  // "cos_theta" or "delta"
  std::vector<SweepPoint> points;
  bool g2_strictly_increasing = false;

  [[nodiscard]] std::vector<double> grid() const;
  [[nodiscard]] std::vector<double> column(double SweepPoint::*field) const;
};

struct SweepConfig {
  HamiltonianKind kind = HamiltonianKind::full;
  bool atomic_decay = true;
  Truncation truncation = Truncation::hard_core(4);
  IntegratorConfig integrator{};
  double window_fraction = 0.5;
  Execution execution = Execution::openmp;
};

/// Full pipeline per cosθ: derive, build, evolve from vacuum, g2.
/// Results are ordered by grid index whatever the execution order.
[[nodiscard]] SweepResult sweep_costheta(const PhysicalParams& p, std::span<const double> grid,
                                         const SweepConfig& cfg);

struct SpectrumConfig {
  Truncation truncation = Truncation::bosonic(1);
  IntegratorConfig integrator{};  // t_end is ignored; see horizon
  double settle_factor = 10.0;    // integrate for settle_factor / Γ
  double horizon = 4000.0;        // cap on the integration time
  double settle_weight = 0.01;
  double window_fraction = 0.25;
  bool atomic_decay = true;
  Execution execution = Execution::openmp;
};

/// Steady cavity photon number versus drive detuning under the blockade-free
/// Hamiltonian. Warnings (e.g. no resonance on the grid) are appended to
/// *warnings when given.
[[nodiscard]] SweepResult transmission_spectrum(const PhysicalParams& p,
                                                std::span<const double> delta_grid,
                                                const SpectrumConfig& cfg,
                                                std::vector<std::string>* warnings = nullptr);

/// Integration time for one detuning: settle_factor over the slowest decay
/// rate among the polaritons that carry at least settle_weight of the
/// linear-response photon number at that detuning, capped at the horizon.
[[nodiscard]] double settle_time(const DerivedParams& dp, const std::array<double, 3>& widths,
                                 double delta, const SpectrumConfig& cfg);

/// Composite detuning grid: a uniform scan over ±1.5 E1 plus fine scans of
/// ±4 linewidths around each polariton resonance. Sorted, duplicates removed.
[[nodiscard]] std::vector<double> default_spectrum_grid(const DerivedParams& dp,
                                                        bool atomic_decay = true,
                                                        std::size_t coarse_points = 301,
                                                        std::size_t fine_points = 41);

struct Peak {
  std::size_t index = 0;
  double position = 0.0;  // parabolic refinement on the three neighbours
  double height = 0.0;
};

/// Strict local maxima of a sampled curve (grid need not be uniform).
[[nodiscard]] std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y,
                                           double min_relative_height = 1e-3);

/// Full width at half maximum around peak index, by linear interpolation of
/// the half-height crossings. nullopt when a crossing is off the grid.
[[nodiscard]] std::optional<double> full_width_half_max(std::span<const double> x,
                                                        std::span<const double> y,
                                                        std::size_t peak_index);

[[nodiscard]] bool strictly_increasing(std::span<const double> values);

/// Dominant oscillation period of a sampled series from its mean crossings.
[[nodiscard]] std::optional<double> oscillation_period(std::span<const double> times,
                                                       std::span<const double> values);

}  // namespace polariton
