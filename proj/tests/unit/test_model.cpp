#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "polariton/model.hpp"

using namespace polariton;
using doctest::Approx;

TEST_SUITE("model") {
  TEST_CASE("dimensionless reference point matches the closed-form evaluation") {
    // Oracle values from an independent evaluation of the closed forms.
    const DerivedParams d = derive_params(PhysicalParams::dimensionless_reference());
    CHECK(d.sin_theta == Approx(0.99920).epsilon(1e-5));
    CHECK(d.e1 == Approx(73.54).epsilon(1e-4));
    CHECK(d.control_rabi == Approx(2.942).epsilon(1e-3));
    CHECK(d.k0 == Approx(0.0016).epsilon(1e-9));
    CHECK(d.lambda_blockade == Approx(1.9968).epsilon(1e-9));
    CHECK(d.omega_drive_0 == Approx(0.05657).epsilon(1e-4));
  }

  TEST_CASE("laboratory point reproduces the reported feasibility numbers") {
    const DerivedParams d = derive_params(PhysicalParams::laboratory_reference());
    // Published values carry two or three significant digits.
    CHECK(std::abs(d.lambda_blockade - 99.8) <= 0.1);
    CHECK(std::abs(d.k0 - 0.09) <= 0.01);
    CHECK(std::abs(d.omega_drive_0 - 2.8) <= 0.1);
    CHECK(std::abs(d.omega_drive_1 - 70.0) <= 10.0);
    CHECK(d.omega_drive_2 == d.omega_drive_1);
    CHECK(std::abs(d.chi_bright_bright - 0.08) <= 0.01);
    CHECK(std::abs(d.chi_dark_bright - 2.82) <= 0.01);
    // E1 from the exact mixing angle; the bare coupling √N g is 4898.98.
    CHECK(d.e1 == Approx(std::sqrt(600.0) * 200.0 / std::sqrt(1.0 - 0.0016)).epsilon(1e-14));
  }

  TEST_CASE("without atom coupling the dark polariton is the bare photon") {
    PhysicalParams p;
    p.g = 0.0;
    p.cos_theta = 1.0;
    p.control_rabi = 2.5;
    const DerivedParams d = derive_params(p);
    CHECK(d.lambda_blockade == 0.0);
    CHECK(d.k0 == p.kappa);
    CHECK(d.k1 == 0.0);
    CHECK(d.k2 == 0.0);
    CHECK(d.e1 == 2.5);
    CHECK(d.e2 == -2.5);
  }

  TEST_CASE("invalid inputs are rejected") {
    auto bad = [](auto mutate) {
      PhysicalParams p;
      mutate(p);
      return p;
    };
    CHECK_THROWS_AS(derive_params(bad([](auto& p) { p.cos_theta = 0.0; })), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(bad([](auto& p) { p.cos_theta = 1.2; })), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(bad([](auto& p) { p.cos_theta = 1.0; })), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(bad([](auto& p) { p.kappa = -1.0; })), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(bad([](auto& p) { p.gamma_r = -1e-3; })), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(bad([](auto& p) { p.n_atoms = 0.0; })), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(bad([](auto& p) { p.g = 0.0; })), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(bad([](auto& p) { p.chi_bar = NAN; })), std::invalid_argument);
  }

  TEST_CASE("derived quantities satisfy their identities across random inputs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> cos_dist(1e-3, 0.999), rate(0.0, 10.0);
    for (int i = 0; i < 500; ++i) {
      PhysicalParams p;
      p.cos_theta = cos_dist(rng);
      p.kappa = rate(rng);
      p.chi_bar = rate(rng);
      p.g = 0.01 + rate(rng);
      p.n_atoms = 1.0 + 1000.0 * cos_dist(rng);
      const DerivedParams d = derive_params(p);
      CHECK(d.sin_theta * d.sin_theta + d.cos_theta * d.cos_theta == Approx(1.0).epsilon(1e-15));
      CHECK(d.k0 + d.k1 <= 2.0 * p.kappa + 1e-12);
      CHECK(d.lambda_blockade <= p.chi_bar);
      CHECK(d.e2 == -d.e1);
      CHECK(std::abs(d.e1) == std::abs(d.e2));
      CHECK(d.cos_theta_from_rabi() == Approx(p.cos_theta).epsilon(1e-12));
    }
  }

  TEST_CASE("decreasing cos_theta lowers K0 and raises lambda") {
    PhysicalParams p;
    double last_k0 = INFINITY, last_lambda = -INFINITY;
    for (double c = 0.9; c > 0.01; c -= 0.01) {
      p.cos_theta = c;
      const DerivedParams d = derive_params(p);
      CHECK(d.k0 < last_k0);
      CHECK(d.lambda_blockade > last_lambda);
      last_k0 = d.k0;
      last_lambda = d.lambda_blockade;
    }
  }

  TEST_CASE("feasibility report flags") {
    const auto lab = feasibility_report(PhysicalParams::laboratory_reference(), 50.0, Units::two_pi_mhz);
    CHECK(lab.lambda_over_k0 == Approx(99.84 / 0.0848).epsilon(1e-12));
    CHECK(lab.lambda_over_k0 > 1.0e3);
    CHECK(lab.nonlinearity_beats_cavity);
    CHECK(lab.rwa_holds);
    CHECK(lab.row("lambda").value == Approx(99.84));

    const auto ref = feasibility_report(PhysicalParams::dimensionless_reference());
    CHECK(ref.lambda_over_k0 == Approx(1248.0).epsilon(1e-12));
    CHECK(ref.derived.rwa_margin > 50.0);
    CHECK(ref.all_pass());

    PhysicalParams bare;
    bare.g = 0.0;
    bare.cos_theta = 1.0;
    const auto none = feasibility_report(bare);
    CHECK(none.lambda_over_k0 == 0.0);
    CHECK_FALSE(none.nonlinearity_beats_cavity);

    const auto strict = feasibility_report(PhysicalParams::dimensionless_reference(), 2000.0);
    CHECK_FALSE(strict.nonlinearity_beats_cavity);
    CHECK_THROWS_AS((void)ref.row("missing"), std::out_of_range);
  }

  TEST_CASE("feasibility table is aligned and labelled") {
    const auto report = feasibility_report(PhysicalParams::laboratory_reference(), 50.0, Units::two_pi_mhz);
    const std::string table = format_table(report);
    CHECK(table.find("2pi*MHz") != std::string::npos);
    CHECK(table.find("99.84") != std::string::npos);
    CHECK(table.find("pass") != std::string::npos);
    CHECK(table.find("FAIL") == std::string::npos);
  }
}
