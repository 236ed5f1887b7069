#include "polariton/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polariton {

PhysicalParams PhysicalParams::dimensionless_reference() { return PhysicalParams{}; }

PhysicalParams PhysicalParams::laboratory_reference() {
  PhysicalParams p;
  p.n_atoms = 600.0;
  p.g = 200.0;
  p.kappa = 53.0;
  p.gamma_e = 3.0;
  p.gamma_r = 0.001;  // ~2π·kHz
  p.chi_bar = 100.0;
  p.cos_theta = 0.04;
  p.beta = 7.0;
  p.delta = 0.0;
  return p;
}

namespace {

void require_rate(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument(std::string(name) + " must be a finite non-negative rate");
  }
}

}  // namespace

void validate(const PhysicalParams& p) {
  if (!std::isfinite(p.n_atoms) || p.n_atoms < 1.0) {
    throw std::invalid_argument("n_atoms must be >= 1");
  }
  require_rate(p.g, "g");
  require_rate(p.kappa, "kappa");
  require_rate(p.gamma_e, "gamma_e");
  require_rate(p.gamma_r, "gamma_r");
  require_rate(p.chi_bar, "chi_bar");
  if (!std::isfinite(p.cos_theta) || p.cos_theta <= 0.0 || p.cos_theta > 1.0) {
    throw std::invalid_argument("cos_theta must lie in (0, 1]");
  }
  if (!std::isfinite(p.beta)) throw std::invalid_argument("beta must be finite");
  if (!std::isfinite(p.delta)) throw std::invalid_argument("delta must be finite");
  if (p.g > 0.0 && p.cos_theta == 1.0) {
    throw std::invalid_argument("cos_theta = 1 with g > 0 needs an infinite control field");
  }
  if (p.g == 0.0 && p.cos_theta != 1.0) {
    throw std::invalid_argument("g = 0 forces cos_theta = 1");
  }
  if (p.control_rabi) require_rate(*p.control_rabi, "control_rabi");
}

double DerivedParams::cos_theta_from_rabi() const {
  const double coupling_sq = params.n_atoms * params.g * params.g;
  const double denom = std::sqrt(coupling_sq + control_rabi * control_rabi);
  return denom > 0.0 ? control_rabi / denom : 1.0;
}

DerivedParams derive_params(const PhysicalParams& p) {
  validate(p);
  DerivedParams d;
  d.params = p;
  d.cos_theta = p.cos_theta;
  d.sin_theta = std::sqrt((1.0 - p.cos_theta) * (1.0 + p.cos_theta));

  if (p.g > 0.0) {
    d.e1 = std::sqrt(p.n_atoms) * p.g / d.sin_theta;
    d.control_rabi = p.cos_theta * d.e1;
  } else {
    d.control_rabi = p.control_rabi.value_or(0.0);
    d.e1 = d.control_rabi;
  }
  d.e0 = 0.0;
  d.e2 = -d.e1;

  const double cos_sq = p.cos_theta * p.cos_theta;
  const double sin_sq = d.sin_theta * d.sin_theta;
  d.k0 = p.kappa * cos_sq;
  d.k1 = p.kappa * sin_sq;
  d.k2 = d.k1;
  d.omega_drive_0 = std::sqrt(2.0 * d.k0) * p.beta;
  d.omega_drive_1 = std::sqrt(2.0 * d.k1) * p.beta;
  d.omega_drive_2 = std::sqrt(2.0 * d.k2) * p.beta;
  d.lambda_blockade = p.chi_bar * sin_sq;

  d.chi_bright_bright = p.chi_bar * cos_sq / 2.0;
  d.chi_dark_bright = p.chi_bar * d.sin_theta * p.cos_theta / std::sqrt(2.0);
  const double largest = std::max({d.chi_bright_bright, d.chi_dark_bright,
                                   std::abs(d.omega_drive_0), std::abs(d.omega_drive_1),
                                   std::abs(d.omega_drive_2)});
  d.rwa_margin = largest > 0.0 ? d.e1 / largest : std::numeric_limits<double>::infinity();
  return d;
}

const FeasibilityRow& FeasibilityReport::row(const std::string& key) const {
  for (const auto& r : rows) {
    if (r.key == key) return r;
  }
  throw std::out_of_range("no feasibility row named " + key);
}

std::string unit_label(Units units) {
  return units == Units::kappa ? "kappa" : "2pi*MHz";
}

FeasibilityReport feasibility_report(const PhysicalParams& p, double threshold, Units units) {
  FeasibilityReport r;
  r.derived = derive_params(p);
  r.units = units;
  r.threshold = threshold;
  const auto& d = r.derived;

  r.rows = {
      {"control_rabi", "control Rabi frequency Omega", d.control_rabi, true},
      {"e1", "bright polariton energy E1 = |E2|", d.e1, true},
      {"lambda", "nonlinearity lambda = chi sin^2", d.lambda_blockade, true},
      {"k0", "dark polariton decay K0 = kappa cos^2", d.k0, true},
      {"k1", "bright polariton decay K1 = K2", d.k1, true},
      {"omega0", "dark drive Omega0 = sqrt(2 K0) beta", d.omega_drive_0, true},
      {"omega1", "bright drive Omega1 = Omega2", d.omega_drive_1, true},
      {"chi_cos2_half", "chi cos^2 / 2", d.chi_bright_bright, true},
      {"chi_sincos_sqrt2", "chi sin cos / sqrt2", d.chi_dark_bright, true},
      {"gamma_r", "Rydberg decay gamma_r", p.gamma_r, true},
  };

  r.lambda_over_k0 = d.k0 > 0.0 ? d.lambda_blockade / d.k0 : 0.0;
  if (p.gamma_r > 0.0) {
    r.lambda_over_gamma_r = d.lambda_blockade / p.gamma_r;
  } else {
    r.lambda_over_gamma_r =
        d.lambda_blockade > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  r.nonlinearity_beats_cavity = r.lambda_over_k0 >= threshold;
  r.nonlinearity_beats_rydberg = r.lambda_over_gamma_r >= threshold;
  r.rwa_holds = d.rwa_margin >= threshold;

  r.rows.push_back({"lambda_over_k0", "ratio lambda / K0", r.lambda_over_k0, false});
  r.rows.push_back({"lambda_over_gamma_r", "ratio lambda / gamma_r", r.lambda_over_gamma_r, false});
  r.rows.push_back({"rwa_margin", "RWA margin E1 / max coupling", d.rwa_margin, false});
  return r;
}

std::string format_table(const FeasibilityReport& report) {
  const std::string unit = unit_label(report.units);
  std::size_t width = 0;
  for (const auto& row : report.rows) width = std::max(width, row.label.size());

  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "quantity" << "  "
     << std::right << std::setw(14) << "value" << "  unit\n";
  os << std::string(width + 24, '-') << '\n';
  for (const auto& row : report.rows) {
    os << std::left << std::setw(static_cast<int>(width)) << row.label << "  " << std::right
       << std::setw(14) << std::setprecision(6) << row.value << "  "
       << (row.rate ? unit : std::string("-")) << '\n';
  }
  os << std::string(width + 24, '-') << '\n';
  auto flag = [](bool ok) { return ok ? "pass" : "FAIL"; };
  os << "lambda >> K0       (ratio >= " << report.threshold << "): "
     << flag(report.nonlinearity_beats_cavity) << '\n';
  os << "lambda >> gamma_r  (ratio >= " << report.threshold << "): "
     << flag(report.nonlinearity_beats_rydberg) << '\n';
  os << "rotating-wave step (margin >= " << report.threshold << "): "
     << flag(report.rwa_holds) << '\n';
  return os.str();
}

}  // namespace polariton
