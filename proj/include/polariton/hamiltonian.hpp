#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "polariton/hilbert.hpp"
#include "polariton/model.hpp"
#include "polariton/parallel.hpp"

namespace polariton {

enum class HamiltonianKind {
  full,  // interaction picture, every blockade and drive term with its phase
  rwa,   // static dark-sector terms, decay on all three polaritons
  eff,   // rwa with bright-polariton decay dropped
  eit,   // blockade-free drive and decay only
};

[[nodiscard]] HamiltonianKind parse_hamiltonian_kind(std::string_view name);
[[nodiscard]] std::string_view hamiltonian_kind_name(HamiltonianKind kind);

/// coefficient · e^{i·frequency·t} · op
struct HamiltonianTerm {
  Complex coefficient;
  double frequency = 0.0;
  OperatorMatrix op;
  std::string label;
};

/// H(t) = Σ_k c_k e^{iω_k t} A_k + D, with D = -i Σ_m (Γ_m / 2) n_m.
///
/// The time-dependent list is closed under Hermitian conjugation: terms are
/// only ever inserted together with their conjugate partner. Decay is held as
/// one rate per mode so the master-equation path can recover jump operators.
class HamiltonianTerms {
 public:
  explicit HamiltonianTerms(Basis basis);

  /// Appends c·e^{iωt}·A and its partner c*·e^{-iωt}·A†. Zero coefficients are skipped.
  void add_with_conjugate(Complex coefficient, double frequency, const OperatorMatrix& op,
                          const std::string& label);
  void add_decay(Mode mode, double rate);

  [[nodiscard]] const Basis& basis() const { return basis_; }
  [[nodiscard]] std::size_t dimension() const { return basis_.size(); }
  [[nodiscard]] const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  [[nodiscard]] const std::array<double, 4>& decay_rates() const { return decay_rates_; }
  [[nodiscard]] double decay_rate(Mode m) const { return decay_rates_[static_cast<int>(m)]; }

  [[nodiscard]] OperatorMatrix decay_operator() const;
  /// H(t) - D
  [[nodiscard]] OperatorMatrix coherent_part(double t) const;
  [[nodiscard]] OperatorMatrix evaluate(double t) const;

  /// Labels of terms with frequency exactly zero.
  [[nodiscard]] std::vector<const HamiltonianTerm*> static_terms() const;
  [[nodiscard]] const HamiltonianTerm* find(std::string_view label) const;

  /// Diagnostics raised while building, e.g. a thin rotating-wave margin.
  std::vector<std::string> warnings;

  /// One line per term: label, coefficient, frequency, nnz.
  void write_term_list(std::ostream& os) const;

 private:
  Basis basis_;
  std::vector<HamiltonianTerm> terms_;
  std::array<double, 4> decay_rates_{};
};

/// Terms sharing a frequency summed into one sparse matrix, decay as a
/// diagonal. This is the form the integrators call at every stage.
class CompiledHamiltonian {
 public:
  explicit CompiledHamiltonian(const HamiltonianTerms& h);

  struct Group {
    double frequency = 0.0;
    OperatorMatrix op;
  };

  [[nodiscard]] std::size_t dimension() const { return dimension_; }
  [[nodiscard]] const std::vector<Group>& groups() const { return groups_; }
  [[nodiscard]] const Eigen::VectorXcd& decay_diagonal() const { return decay_; }

  /// out = H(t) psi. Both execution paths run the same per-row arithmetic.
  void apply(double t, const StateVector& psi, StateVector& out,
             Execution exec = Execution::serial) const;
  /// out = H(t) rho, column by column.
  void apply(double t, const DensityMatrix& rho, DensityMatrix& out) const;

  [[nodiscard]] OperatorMatrix at(double t) const;

 private:
  void fill_phases(double t, Complex* phases) const;

  std::size_t dimension_ = 0;
  std::vector<Group> groups_;
  std::vector<int> conjugate_of_;  // earlier group at -frequency, or -1
  Eigen::VectorXcd decay_;
};

/// Interaction-picture blockade Hamiltonian with all six pair terms and three
/// drives, each with its conjugate, plus cavity-leakage decay on b0, b1, b2.
[[nodiscard]] HamiltonianTerms build_h_int(const DerivedParams& dp, const Basis& basis);
/// Conventional intracavity EIT: drives and decay, no blockade.
[[nodiscard]] HamiltonianTerms build_h_eit(const DerivedParams& dp, const Basis& basis);
/// Rotating-wave dark sector: λ p† b0 b0 + Ω0 b0 + H.c., decay on all polaritons.
/// The drive keeps its e^{iΔt} phase; at Δ = 0 every term is static.
[[nodiscard]] HamiltonianTerms build_h_rwa(const DerivedParams& dp, const Basis& basis,
                                           double rwa_threshold = 50.0);
/// build_h_rwa with decay only on b0.
[[nodiscard]] HamiltonianTerms build_h_eff(const DerivedParams& dp, const Basis& basis,
                                           double rwa_threshold = 50.0);
/// Adds γ_r on b0 and γ_e on b1 and b2.
[[nodiscard]] HamiltonianTerms add_atomic_decay(HamiltonianTerms h, const DerivedParams& dp);

[[nodiscard]] HamiltonianTerms build_hamiltonian(HamiltonianKind kind, const DerivedParams& dp,
                                                 const Basis& basis, bool atomic_decay = true);

struct SingleExcitationSystem {
  Eigen::Matrix3d hamiltonian;   // basis (a†, C_e†, C_r2†)|G>
  Eigen::Vector3d eigenvalues;   // ascending
  Eigen::Matrix3d eigenvectors;  // columns
};

/// Diagonalizes the bare single-excitation EIT Hamiltonian.
[[nodiscard]] SingleExcitationSystem single_excitation_h1(const DerivedParams& dp);

}  // namespace polariton
