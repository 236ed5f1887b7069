#pragma once

#include <cmath>
#include <random>

#include "polariton/hilbert.hpp"

namespace polariton::testing {

inline double max_abs(const OperatorMatrix& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (OperatorMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  }
  return out;
}

inline Complex element(const OperatorMatrix& m, std::size_t row, std::size_t col) {
  return m.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

inline Complex element(const Basis& b, const OperatorMatrix& m, BasisState bra, BasisState ket) {
  return element(m, *b.index_of(bra), *b.index_of(ket));
}

inline StateVector random_state(std::size_t dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  StateVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

}  // namespace polariton::testing
