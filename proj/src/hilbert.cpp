#include "polariton/hilbert.hpp"

#include <cmath>
#include <iomanip>
#include <stdexcept>
#include <string>

namespace polariton {

Mode parse_mode(std::string_view name) {
  if (name == "b0") return Mode::b0;
  if (name == "b1") return Mode::b1;
  if (name == "b2") return Mode::b2;
  if (name == "p" || name == "pair") return Mode::pair;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::b0: return "b0";
    case Mode::b1: return "b1";
    case Mode::b2: return "b2";
    case Mode::pair: return "p";
  }
  return "?";
}

int BasisState::occupation(Mode m) const {
  switch (m) {
    case Mode::b0: return n0;
    case Mode::b1: return n1;
    case Mode::b2: return n2;
    case Mode::pair: return np;
  }
  return 0;
}

BasisState BasisState::shifted(Mode m, int by) const {
  BasisState s = *this;
  switch (m) {
    case Mode::b0: s.n0 += by; break;
    case Mode::b1: s.n1 += by; break;
    case Mode::b2: s.n2 += by; break;
    case Mode::pair: s.np += by; break;
  }
  return s;
}

std::ostream& operator<<(std::ostream& os, const BasisState& s) {
  return os << '|' << s.n0 << ',' << s.n1 << ',' << s.n2 << ',' << s.np << '>';
}

Truncation Truncation::hard_core(int n_tot_max) {
  Truncation t;
  t.n_tot_max = n_tot_max;
  t.mode_caps[static_cast<int>(Mode::pair)] = 1;
  return t;
}

Truncation Truncation::bosonic(int n_tot_max) {
  Truncation t;
  t.n_tot_max = n_tot_max;
  return t;
}

Truncation Truncation::dark_sector(int n_tot_max, bool hard_core_pair) {
  Truncation t = hard_core_pair ? hard_core(n_tot_max) : bosonic(n_tot_max);
  t.mode_caps[static_cast<int>(Mode::b1)] = 0;
  t.mode_caps[static_cast<int>(Mode::b2)] = 0;
  return t;
}

bool Truncation::admits(const BasisState& s) const {
  if (s.n0 < 0 || s.n1 < 0 || s.n2 < 0 || s.np < 0) return false;
  if (s.weight() > n_tot_max) return false;
  for (Mode m : kAllModes) {
    const auto& cap = mode_caps[static_cast<int>(m)];
    if (cap && s.occupation(m) > *cap) return false;
  }
  return true;
}

Basis::Basis(Truncation truncation) : truncation_(truncation) {
  if (truncation_.n_tot_max < 0) {
    throw std::invalid_argument("n_tot_max must be >= 0");
  }
  for (const auto& cap : truncation_.mode_caps) {
    if (cap && *cap < 0) throw std::invalid_argument("per-mode caps must be >= 0");
  }
  const int n = truncation_.n_tot_max;
  for (int n0 = 0; n0 <= n; ++n0) {
    for (int n1 = 0; n0 + n1 <= n; ++n1) {
      for (int n2 = 0; n0 + n1 + n2 <= n; ++n2) {
        for (int np = 0; n0 + n1 + n2 + 2 * np <= n; ++np) {
          const BasisState s{n0, n1, n2, np};
          if (truncation_.admits(s)) {
            index_.emplace(s, states_.size());
            states_.push_back(s);
          }
        }
      }
    }
  }
}

std::optional<std::size_t> Basis::index_of(const BasisState& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateVector Basis::vacuum() const { return basis_vector(BasisState{}); }

StateVector Basis::basis_vector(const BasisState& s) const {
  auto idx = index_of(s);
  if (!idx) throw std::out_of_range("state outside the truncated basis");
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(size()));
  v(static_cast<Eigen::Index>(*idx)) = 1.0;
  return v;
}

Basis build_basis(const Truncation& truncation) { return Basis(truncation); }

Basis build_basis(int n_tot_max) { return Basis(Truncation::bosonic(n_tot_max)); }

namespace {

using Triplet = Eigen::Triplet<Complex>;

OperatorMatrix from_triplets(const Basis& basis, const std::vector<Triplet>& entries) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  OperatorMatrix m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  m.prune(Complex(0.0));
  m.makeCompressed();
  return m;
}

}  // namespace

OperatorMatrix annihilator(const Basis& basis, Mode mode) {
  std::vector<Triplet> entries;
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const auto& s = basis.state(col);
    const int n = s.occupation(mode);
    if (n == 0) continue;
    if (auto row = basis.index_of(s.shifted(mode, -1))) {
      entries.emplace_back(static_cast<int>(*row), static_cast<int>(col),
                           Complex(std::sqrt(static_cast<double>(n))));
    }
  }
  return from_triplets(basis, entries);
}

OperatorMatrix annihilator(const Basis& basis, std::string_view mode) {
  return annihilator(basis, parse_mode(mode));
}

OperatorMatrix creator(const Basis& basis, Mode mode) {
  std::vector<Triplet> entries;
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const auto& s = basis.state(col);
    if (auto row = basis.index_of(s.shifted(mode, +1))) {
      entries.emplace_back(static_cast<int>(*row), static_cast<int>(col),
                           Complex(std::sqrt(static_cast<double>(s.occupation(mode) + 1))));
    }
  }
  return from_triplets(basis, entries);
}

OperatorMatrix number_operator(const Basis& basis, Mode mode) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int n = basis.state(i).occupation(mode);
    if (n != 0) entries.emplace_back(static_cast<int>(i), static_cast<int>(i), Complex(n));
  }
  return from_triplets(basis, entries);
}

OperatorMatrix total_excitation_operator(const Basis& basis) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int w = basis.state(i).weight();
    if (w != 0) entries.emplace_back(static_cast<int>(i), static_cast<int>(i), Complex(w));
  }
  return from_triplets(basis, entries);
}

OperatorMatrix identity_operator(const Basis& basis) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i), Complex(1.0));
  }
  return from_triplets(basis, entries);
}

void write_coordinate_list(const OperatorMatrix& op, std::ostream& os) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(17);
  for (int k = 0; k < op.outerSize(); ++k) {
    for (OperatorMatrix::InnerIterator it(op, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
         << '\n';
    }
  }
  os.flags(flags);
  os.precision(precision);
}

}  // namespace polariton
