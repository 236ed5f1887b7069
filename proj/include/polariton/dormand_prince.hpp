#pragma once

// Dormand–Prince 5(4) with the dopri5 continuous extension. Generic over
// Eigen dense complex containers so the wavefunction and density-matrix
// paths share one stepper.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace polariton {

/// Integrator failure: step-size underflow, non-finite state or a violated
/// physical bound.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  [[nodiscard]] double time() const { return time_; }

 private:
  double time_;
};

struct IntegratorConfig {
  double t_start = 0.0;
  double t_end = 500.0;
  double output_stride = 0.05;
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;  // 0 means unbounded
  long long max_steps = 200'000'000;

  void validate() const;
};

struct StepStatistics {
  long long accepted = 0;
  long long rejected = 0;
  long long evaluations = 0;
};

namespace detail {

struct DopriTableau {
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

template <class State>
bool all_finite(const State& s) {
  return s.allFinite();
}

}  // namespace detail

/// Integrates dy/dt = rhs(t, y) from cfg.t_start to cfg.t_end.
///
/// observe(t, y) fires at t_start and at every multiple of output_stride
/// (dense output between steps) up to t_end. After each accepted step
/// after_step(t, y, dydt) may rescale y and dydt together, which keeps a
/// linear problem well scaled without disturbing the FSAL derivative.
template <class State, class Rhs, class Observe, class AfterStep>
StepStatistics integrate_dopri5(Rhs&& rhs, State y, const IntegratorConfig& cfg,
                                Observe&& observe, AfterStep&& after_step) {
  using T = detail::DopriTableau;
  cfg.validate();

  StepStatistics stats;
  double t = cfg.t_start;
  const double t_end = cfg.t_end;
  const double span = t_end - t;

  State k1, k2, k3, k4, k5, k6, k7, y_stage, y_new, err;
  rhs(t, y, k1);
  ++stats.evaluations;

  // RMS of v relative to atol + rtol * max(|a|, |b|), without temporaries.
  auto scaled_rms = [&](const State& v, const State& a, const State& b) {
    return std::sqrt(
        (v.cwiseAbs().array() /
         (cfg.atol + cfg.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()))
            .square()
            .mean());
  };

  // Initial step from the Hairer–Wanner heuristic.
  double h;
  {
    const double d0 = scaled_rms(y, y, y);
    const double d1 = scaled_rms(k1, y, y);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, span);
  }
  if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);

  long long out_index = 0;
  auto output_time = [&](long long k) {
    return std::min(cfg.t_start + static_cast<double>(k) * cfg.output_stride, t_end);
  };
  observe(t, y);
  ++out_index;
  bool outputs_done = false;

  const double min_step = 64.0 * std::numeric_limits<double>::epsilon();
  while (t < t_end) {
    if (stats.accepted + stats.rejected >= cfg.max_steps) {
      throw NumericalError("maximum number of integration steps exceeded", t);
    }
    bool final_step = false;
    if (t + h >= t_end || t_end - (t + h) < min_step * std::max(1.0, std::abs(t_end))) {
      h = t_end - t;
      final_step = true;
    }
    if (h < min_step * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "step size underflow at t = " << t;
      throw NumericalError(msg.str(), t);
    }

    y_stage.noalias() = y + h * (T::a21 * k1);
    rhs(t + T::c2 * h, y_stage, k2);
    y_stage.noalias() = y + h * (T::a31 * k1 + T::a32 * k2);
    rhs(t + T::c3 * h, y_stage, k3);
    y_stage.noalias() = y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
    rhs(t + T::c4 * h, y_stage, k4);
    y_stage.noalias() = y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
    rhs(t + T::c5 * h, y_stage, k5);
    y_stage.noalias() = y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5);
    rhs(t + h, y_stage, k6);
    y_new.noalias() = y + h * (T::a71 * k1 + T::a73 * k3 + T::a74 * k4 + T::a75 * k5 + T::a76 * k6);
    rhs(t + h, y_new, k7);
    stats.evaluations += 6;

    err.noalias() =
        h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
    const double err_norm = scaled_rms(err, y, y_new);

    if (!std::isfinite(err_norm) || !detail::all_finite(y_new)) {
      ++stats.rejected;
      h *= 0.1;
      if (h < min_step * std::max(1.0, std::abs(t))) {
        std::ostringstream msg;
        msg << "non-finite amplitudes at t = " << t;
        throw NumericalError(msg.str(), t);
      }
      continue;
    }

    if (err_norm <= 1.0) {
      const double t_new = final_step ? t_end : t + h;
      const double slack = 1e-12 * std::max(1.0, std::abs(t_new));
      if (!outputs_done && output_time(out_index) <= t_new + slack) {
        const State ydiff = y_new - y;
        const State bspl = h * k1 - ydiff;
        const State r4 = ydiff - h * k7 - bspl;
        const State r5 = h * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 + T::d6 * k6 +
                              T::d7 * k7);
        while (!outputs_done) {
          const double t_out = output_time(out_index);
          if (t_out > t_new + slack) break;
          const double theta = std::clamp((t_out - t) / h, 0.0, 1.0);
          const double theta1 = 1.0 - theta;
          const State y_out =
              y + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
          observe(t_out, y_out);
          ++out_index;
          outputs_done = t_out >= t_end;
        }
      }
      t = t_new;
      y.swap(y_new);
      k1.swap(k7);
      ++stats.accepted;
      after_step(t, y, k1);

      const double fac = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 1.0);
    }
    if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
  }
  return stats;
}

template <class State, class Rhs, class Observe>
StepStatistics integrate_dopri5(Rhs&& rhs, State y, const IntegratorConfig& cfg,
                                Observe&& observe) {
  return integrate_dopri5(std::forward<Rhs>(rhs), std::move(y), cfg,
                          std::forward<Observe>(observe), [](double, State&, State&) {});
}

}  // namespace polariton
