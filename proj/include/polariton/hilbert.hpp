#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace polariton {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

/// The three polariton modes and the bosonized Rydberg pair.
enum class Mode : int { b0 = 0, b1 = 1, b2 = 2, pair = 3 };

inline constexpr std::array<Mode, 4> kAllModes{Mode::b0, Mode::b1, Mode::b2, Mode::pair};

/// Quanta carried by one excitation of the mode.
constexpr int mode_weight(Mode m) { return m == Mode::pair ? 2 : 1; }

[[nodiscard]] Mode parse_mode(std::string_view name);
[[nodiscard]] std::string_view mode_name(Mode m);

struct BasisState {
  int n0 = 0;
  int n1 = 0;
  int n2 = 0;
  int np = 0;

  [[nodiscard]] int occupation(Mode m) const;
  [[nodiscard]] BasisState shifted(Mode m, int by) const;
  [[nodiscard]] int weight() const { return n0 + n1 + n2 + 2 * np; }

  auto operator<=>(const BasisState&) const = default;
};

std::ostream& operator<<(std::ostream& os, const BasisState& s);

struct Truncation {
  int n_tot_max = 4;
  // Per-mode occupation caps; empty means bounded only by n_tot_max.
  std::array<std::optional<int>, 4> mode_caps{};

  /// Pair mode restricted to np <= 1.
  static Truncation hard_core(int n_tot_max);
  /// Pair mode bounded only by the excitation weight.
  static Truncation bosonic(int n_tot_max);
  /// Dark polariton and pair only; bright modes frozen at zero.
  static Truncation dark_sector(int n_tot_max, bool hard_core_pair = true);

  [[nodiscard]] bool admits(const BasisState& s) const;
};

class Basis {
 public:
  explicit Basis(Truncation truncation);

  [[nodiscard]] std::size_t size() const { return states_.size(); }
  [[nodiscard]] const BasisState& state(std::size_t i) const { return states_.at(i); }
  [[nodiscard]] const std::vector<BasisState>& states() const { return states_; }
  [[nodiscard]] std::optional<std::size_t> index_of(const BasisState& s) const;
  [[nodiscard]] const Truncation& truncation() const { return truncation_; }

  [[nodiscard]] StateVector vacuum() const;
  [[nodiscard]] StateVector basis_vector(const BasisState& s) const;

 private:
  Truncation truncation_;
  std::vector<BasisState> states_;
  std::map<BasisState, std::size_t> index_;
};

/// Enumerates every state of weight <= n_tot_max (pair counted twice) that
/// respects the per-mode caps, in lexicographic (n0, n1, n2, np) order.
[[nodiscard]] Basis build_basis(const Truncation& truncation);
[[nodiscard]] Basis build_basis(int n_tot_max);

[[nodiscard]] OperatorMatrix annihilator(const Basis& basis, Mode mode);
[[nodiscard]] OperatorMatrix annihilator(const Basis& basis, std::string_view mode);
/// Raising operator assembled directly from √(n+1) elements, not as an adjoint.
[[nodiscard]] OperatorMatrix creator(const Basis& basis, Mode mode);
[[nodiscard]] OperatorMatrix number_operator(const Basis& basis, Mode mode);
/// Diagonal excitation weight n0 + n1 + n2 + 2 np.
[[nodiscard]] OperatorMatrix total_excitation_operator(const Basis& basis);
[[nodiscard]] OperatorMatrix identity_operator(const Basis& basis);

/// One "row col re im" line per stored entry.
void write_coordinate_list(const OperatorMatrix& op, std::ostream& os);

}  // namespace polariton
