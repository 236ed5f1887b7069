#pragma once

#include <optional>
#include <string>
#include <vector>

namespace polariton {

enum class Units { kappa, two_pi_mhz };

/// Raw model inputs. Rates share one unit: κ = 1 by default, or 2π·MHz for
/// the laboratory-scale feasibility numbers.
struct PhysicalParams {
  double n_atoms = 600.0;
  double g = 3.0;
  double kappa = 1.0;
  double gamma_e = 1.0;
  double gamma_r = 0.001;
  double chi_bar = 2.0;
  double cos_theta = 0.04;  // primary knob; the control Rabi frequency is derived
  double beta = 1.0;
  double delta = 0.0;  // drive detuning from the cavity resonance

  // Only consulted when g == 0, where cos_theta = 1 and the control Rabi
  // frequency is not fixed by the mixing angle.
  std::optional<double> control_rabi;

  /// Dimensionless blockade reference point (κ = 1).
  static PhysicalParams dimensionless_reference();
  /// Laboratory-scale reference point, rates in 2π·MHz.
  static PhysicalParams laboratory_reference();
};

struct DerivedParams {
  PhysicalParams params;

  double cos_theta = 0.0;
  double sin_theta = 0.0;
  double control_rabi = 0.0;  // Ω
  double e0 = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double omega_drive_0 = 0.0;
  double omega_drive_1 = 0.0;
  double omega_drive_2 = 0.0;
  double lambda_blockade = 0.0;

  // Couplings that the rotating-wave step drops; rwa_margin compares E₁
  // against the largest of these and the three drive strengths.
  double chi_bright_bright = 0.0;  // χ̄cos²θ/2
  double chi_dark_bright = 0.0;    // χ̄sinθcosθ/√2
  double rwa_margin = 0.0;

  /// cosθ recomputed from Ω as Ω/√(Ng² + Ω²).
  [[nodiscard]] double cos_theta_from_rabi() const;
};

/// Throws std::invalid_argument when the inputs violate the model invariants.
void validate(const PhysicalParams& p);

[[nodiscard]] DerivedParams derive_params(const PhysicalParams& p);

struct FeasibilityRow {
  std::string key;
  std::string label;
  double value = 0.0;
  bool rate = true;  // carries the rate unit
};

struct FeasibilityReport {
  DerivedParams derived;
  Units units = Units::kappa;
  double threshold = 50.0;
  std::vector<FeasibilityRow> rows;

  double lambda_over_k0 = 0.0;
  double lambda_over_gamma_r = 0.0;
  bool nonlinearity_beats_cavity = false;
  bool nonlinearity_beats_rydberg = false;
  bool rwa_holds = false;

  [[nodiscard]] const FeasibilityRow& row(const std::string& key) const;
  [[nodiscard]] bool all_pass() const {
    return nonlinearity_beats_cavity && nonlinearity_beats_rydberg && rwa_holds;
  }
};

[[nodiscard]] FeasibilityReport feasibility_report(const PhysicalParams& p,
                                                   double threshold = 50.0,
                                                   Units units = Units::kappa);

[[nodiscard]] std::string unit_label(Units units);
[[nodiscard]] std::string format_table(const FeasibilityReport& report);

}  // namespace polariton
