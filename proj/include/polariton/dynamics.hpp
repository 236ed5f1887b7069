#pragma once

#include <functional>
#include <span>
#include <vector>

#include "polariton/dormand_prince.hpp"
#include "polariton/hamiltonian.hpp"

namespace polariton {

/// No-jump trajectory of i dψ/dt = H(t) ψ.
///
/// States are stored with unit norm; the decay of the unnormalized
/// wavefunction is carried separately in norm_sq (= ‖ψ(t)‖², the no-jump
/// survival probability) and log_norm_sq, which stays finite long after
/// norm_sq underflows.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> norm_sq;
  std::vector<double> log_norm_sq;
  StepStatistics stats;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  StepStatistics stats;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

/// Evolves psi0 under h. Throws NumericalError on step-size underflow or
/// non-finite amplitudes, std::invalid_argument on a dimension mismatch.
[[nodiscard]] Trajectory evolve_schrodinger(const HamiltonianTerms& h, const StateVector& psi0,
                                            const IntegratorConfig& cfg,
                                            Execution exec = Execution::serial);

/// Master-equation oracle. The coherent part is h without its decay; each
/// per-mode decay rate Γ_m becomes a dissipator with jump operator √Γ_m b_m.
/// Throws NumericalError when an eigenvalue of ρ drops below -1e-8.
[[nodiscard]] DensityTrajectory evolve_lindblad(const HamiltonianTerms& h,
                                                const DensityMatrix& rho0,
                                                const IntegratorConfig& cfg);

/// Time average of a sampled series over the final window_fraction of its
/// span, by the trapezoid rule. Throws std::invalid_argument on an empty window.
[[nodiscard]] double window_average(std::span<const double> times, std::span<const double> values,
                                    double window_fraction);

/// First index inside the final window_fraction of the span.
[[nodiscard]] std::size_t window_start(std::span<const double> times, double window_fraction);

/// Window averages of the normalized expectation values of each operator.
[[nodiscard]] std::vector<double> steady_window_stats(const Trajectory& traj,
                                                      std::span<const OperatorMatrix> observables,
                                                      double window_fraction = 0.5);
[[nodiscard]] std::vector<double> steady_window_stats(const DensityTrajectory& traj,
                                                      std::span<const OperatorMatrix> observables,
                                                      double window_fraction = 0.5);

}  // namespace polariton
