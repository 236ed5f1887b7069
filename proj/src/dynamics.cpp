#include "polariton/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace polariton {

void IntegratorConfig::validate() const {
  if (!(t_end > t_start)) throw std::invalid_argument("t_end must exceed t_start");
  if (!(output_stride > 0.0)) throw std::invalid_argument("output stride must be > 0");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
  if (max_step < 0.0) throw std::invalid_argument("max_step must be >= 0");
}

Trajectory evolve_schrodinger(const HamiltonianTerms& h, const StateVector& psi0,
                              const IntegratorConfig& cfg, Execution exec) {
  if (static_cast<std::size_t>(psi0.size()) != h.dimension()) {
    throw std::invalid_argument("initial state dimension does not match the basis");
  }
  const double norm0 = psi0.squaredNorm();
  if (!(norm0 > 0.0) || !std::isfinite(norm0)) {
    throw std::invalid_argument("initial state must have a finite non-zero norm");
  }

  const CompiledHamiltonian compiled(h);
  Trajectory traj;
  const auto expected = static_cast<std::size_t>((cfg.t_end - cfg.t_start) / cfg.output_stride) + 2;
  traj.times.reserve(expected);
  traj.states.reserve(expected);

  // The integrated vector is ψ / exp(log_scale / 2); renormalizing after every
  // step keeps the absolute tolerance meaningful however far the norm decays.
  double log_scale = 0.0;
  StateVector start = psi0 / std::sqrt(norm0);
  log_scale = std::log(norm0);

  auto rhs = [&](double t, const StateVector& y, StateVector& dydt) {
    compiled.apply(t, y, dydt, exec);
    dydt *= Complex(0.0, -1.0);
  };
  auto observe = [&](double t, const StateVector& y) {
    const double n = y.squaredNorm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      std::ostringstream msg;
      msg << "non-finite or vanishing state at t = " << t;
      throw NumericalError(msg.str(), t);
    }
    traj.times.push_back(t);
    traj.states.push_back(y / std::sqrt(n));
    const double log_n = log_scale + std::log(n);
    traj.log_norm_sq.push_back(log_n);
    traj.norm_sq.push_back(std::exp(log_n));
  };
  auto after_step = [&](double, StateVector& y, StateVector& dydt) {
    const double n = y.squaredNorm();
    if (n > 0.0 && std::isfinite(n)) {
      const double inv = 1.0 / std::sqrt(n);
      y *= inv;
      dydt *= inv;
      log_scale += std::log(n);
    }
  };

  traj.stats = integrate_dopri5<StateVector>(rhs, std::move(start), cfg, observe, after_step);
  return traj;
}

DensityTrajectory evolve_lindblad(const HamiltonianTerms& h, const DensityMatrix& rho0,
                                  const IntegratorConfig& cfg) {
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw std::invalid_argument("initial density matrix dimension does not match the basis");
  }

  // The compiled operator already contains the anti-Hermitian decay, so
  // -i(H ρ - ρ H†) supplies the loss and the jump terms restore the trace.
  const CompiledHamiltonian compiled(h);
  struct Jump {
    double rate;
    OperatorMatrix op;
    OperatorMatrix op_dag;
  };
  std::vector<Jump> jumps;
  for (Mode m : kAllModes) {
    const double rate = h.decay_rate(m);
    if (rate > 0.0) {
      OperatorMatrix b = annihilator(h.basis(), m);
      OperatorMatrix b_dag = b.adjoint();
      jumps.push_back({rate, std::move(b), std::move(b_dag)});
    }
  }

  DensityMatrix h_rho(dim, dim);
  DensityMatrix tmp(dim, dim);
  auto rhs = [&](double t, const DensityMatrix& rho, DensityMatrix& drho) {
    compiled.apply(t, rho, h_rho);
    drho = Complex(0.0, -1.0) * h_rho;
    drho.noalias() += Complex(0.0, 1.0) * h_rho.adjoint();
    for (const auto& j : jumps) {
      tmp.noalias() = j.op * rho;
      drho.noalias() += j.rate * (tmp * j.op_dag);
    }
  };

  DensityTrajectory traj;
  auto observe = [&](double t, const DensityMatrix& rho) {
    const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(herm, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues().minCoeff();
    if (lowest < -1e-8) {
      std::ostringstream msg;
      msg << "density matrix eigenvalue " << lowest << " at t = " << t
          << " (integrator tolerance too loose)";
      throw NumericalError(msg.str(), t);
    }
    traj.times.push_back(t);
    traj.states.push_back(herm);
  };

  traj.stats = integrate_dopri5<DensityMatrix>(rhs, rho0, cfg, observe);
  return traj;
}

std::size_t window_start(std::span<const double> times, double window_fraction) {
  if (!(window_fraction > 0.0) || window_fraction > 1.0) {
    throw std::invalid_argument("window fraction must lie in (0, 1]");
  }
  if (times.empty()) throw std::invalid_argument("empty window");
  const double t_first = times.front();
  const double t_last = times.back();
  const double t_window = t_last - window_fraction * (t_last - t_first);
  const double slack = 1e-9 * std::max(1.0, std::abs(t_last));
  std::size_t i = 0;
  while (i < times.size() && times[i] < t_window - slack) ++i;
  if (i >= times.size()) throw std::invalid_argument("empty window");
  return i;
}

double window_average(std::span<const double> times, std::span<const double> values,
                      double window_fraction) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("times and values differ in length");
  }
  const std::size_t first = window_start(times, window_fraction);
  const std::size_t last = times.size() - 1;
  if (first == last) return values[last];
  double integral = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    integral += 0.5 * (values[i] + values[i + 1]) * (times[i + 1] - times[i]);
  }
  return integral / (times[last] - times[first]);
}

std::vector<double> steady_window_stats(const Trajectory& traj,
                                        std::span<const OperatorMatrix> observables,
                                        double window_fraction) {
  const std::size_t first = window_start(traj.times, window_fraction);
  std::span<const double> times(traj.times.begin() + static_cast<std::ptrdiff_t>(first),
                                traj.times.end());
  std::vector<double> averages;
  std::vector<double> series(times.size());
  for (const auto& op : observables) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto& psi = traj.states[first + i];
      series[i] = psi.dot(op * psi).real() / psi.squaredNorm();
    }
    averages.push_back(window_average(times, series, 1.0));
  }
  return averages;
}

std::vector<double> steady_window_stats(const DensityTrajectory& traj,
                                        std::span<const OperatorMatrix> observables,
                                        double window_fraction) {
  const std::size_t first = window_start(traj.times, window_fraction);
  std::span<const double> times(traj.times.begin() + static_cast<std::ptrdiff_t>(first),
                                traj.times.end());
  std::vector<double> averages;
  std::vector<double> series(times.size());
  for (const auto& op : observables) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto& rho = traj.states[first + i];
      series[i] = (op * rho).trace().real() / rho.trace().real();
    }
    averages.push_back(window_average(times, series, 1.0));
  }
  return averages;
}

}  // namespace polariton
