#include "polariton/hamiltonian.hpp"

#include <array>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace polariton {

HamiltonianKind parse_hamiltonian_kind(std::string_view name) {
  if (name == "full" || name == "int") return HamiltonianKind::full;
  if (name == "rwa") return HamiltonianKind::rwa;
  if (name == "eff") return HamiltonianKind::eff;
  if (name == "eit") return HamiltonianKind::eit;
  throw std::invalid_argument("unknown hamiltonian '" + std::string(name) +
                              "' (expected full, rwa, eff or eit)");
}

std::string_view hamiltonian_kind_name(HamiltonianKind kind) {
  switch (kind) {
    case HamiltonianKind::full: return "full";
    case HamiltonianKind::rwa: return "rwa";
    case HamiltonianKind::eff: return "eff";
    case HamiltonianKind::eit: return "eit";
  }
  return "?";
}

HamiltonianTerms::HamiltonianTerms(Basis basis) : basis_(std::move(basis)) {}

void HamiltonianTerms::add_with_conjugate(Complex coefficient, double frequency,
                                          const OperatorMatrix& op, const std::string& label) {
  if (coefficient == Complex(0.0)) return;
  OperatorMatrix adj = op.adjoint();
  terms_.push_back({coefficient, frequency, op, label});
  terms_.push_back({std::conj(coefficient), -frequency, std::move(adj), "h.c.(" + label + ")"});
}

void HamiltonianTerms::add_decay(Mode mode, double rate) {
  if (!(rate >= 0.0)) throw std::invalid_argument("decay rates must be >= 0");
  decay_rates_[static_cast<int>(mode)] += rate;
}

OperatorMatrix HamiltonianTerms::decay_operator() const {
  const auto dim = static_cast<Eigen::Index>(basis_.size());
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    double width = 0.0;
    for (Mode m : kAllModes) {
      width += decay_rates_[static_cast<int>(m)] * basis_.state(i).occupation(m);
    }
    if (width != 0.0) {
      entries.emplace_back(static_cast<int>(i), static_cast<int>(i), Complex(0.0, -0.5 * width));
    }
  }
  OperatorMatrix d(dim, dim);
  d.setFromTriplets(entries.begin(), entries.end());
  return d;
}

OperatorMatrix HamiltonianTerms::coherent_part(double t) const {
  const auto dim = static_cast<Eigen::Index>(basis_.size());
  OperatorMatrix h(dim, dim);
  for (const auto& term : terms_) {
    const Complex phase = std::exp(Complex(0.0, term.frequency * t));
    h += (term.coefficient * phase) * term.op;
  }
  h.prune(Complex(0.0));
  return h;
}

OperatorMatrix HamiltonianTerms::evaluate(double t) const {
  OperatorMatrix h = coherent_part(t);
  h += decay_operator();
  return h;
}

std::vector<const HamiltonianTerm*> HamiltonianTerms::static_terms() const {
  std::vector<const HamiltonianTerm*> out;
  for (const auto& term : terms_) {
    if (term.frequency == 0.0) out.push_back(&term);
  }
  return out;
}

const HamiltonianTerm* HamiltonianTerms::find(std::string_view label) const {
  for (const auto& term : terms_) {
    if (term.label == label) return &term;
  }
  return nullptr;
}

void HamiltonianTerms::write_term_list(std::ostream& os) const {
  for (const auto& term : terms_) {
    os << std::left << std::setw(20) << term.label << std::right << std::setprecision(10)
       << " c=(" << term.coefficient.real() << ',' << term.coefficient.imag() << ")"
       << " w=" << term.frequency << " nnz=" << term.op.nonZeros() << '\n';
  }
  for (Mode m : kAllModes) {
    const double rate = decay_rates_[static_cast<int>(m)];
    if (rate != 0.0) os << "decay " << mode_name(m) << " rate=" << rate << '\n';
  }
}

CompiledHamiltonian::CompiledHamiltonian(const HamiltonianTerms& h) : dimension_(h.dimension()) {
  const auto dim = static_cast<Eigen::Index>(dimension_);
  for (const auto& term : h.terms()) {
    Group* group = nullptr;
    for (auto& g : groups_) {
      if (g.frequency == term.frequency) {
        group = &g;
        break;
      }
    }
    if (group == nullptr) {
      groups_.push_back({term.frequency, OperatorMatrix(dim, dim)});
      group = &groups_.back();
    }
    group->op += term.coefficient * term.op;
  }
  for (auto& g : groups_) {
    g.op.prune(Complex(0.0));
    g.op.makeCompressed();
  }
  std::erase_if(groups_, [](const Group& g) { return g.op.nonZeros() == 0; });
  conjugate_of_.assign(groups_.size(), -1);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (std::size_t j = 0; j < g; ++j) {
      if (groups_[j].frequency == -groups_[g].frequency && conjugate_of_[j] < 0) {
        conjugate_of_[g] = static_cast<int>(j);
        break;
      }
    }
  }

  decay_ = Eigen::VectorXcd::Zero(dim);
  const OperatorMatrix d = h.decay_operator();
  for (int k = 0; k < d.outerSize(); ++k) {
    for (OperatorMatrix::InnerIterator it(d, k); it; ++it) decay_(it.row()) += it.value();
  }
}

namespace {

// One output row: Σ_g phase_g Σ_k A_g(row, k) ψ_k + d_row ψ_row.
inline Complex row_product(const std::vector<CompiledHamiltonian::Group>& groups,
                           const Complex* phases, const Eigen::VectorXcd& decay,
                           const StateVector& psi, Eigen::Index row) {
  Complex acc = decay(row) * psi(row);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Complex partial(0.0);
    for (OperatorMatrix::InnerIterator it(groups[g].op, row); it; ++it) {
      partial += it.value() * psi(it.col());
    }
    acc += phases[g] * partial;
  }
  return acc;
}

}  // namespace

void CompiledHamiltonian::fill_phases(double t, Complex* phases) const {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const int partner = conjugate_of_[g];
    if (partner >= 0) {
      phases[g] = std::conj(phases[partner]);
    } else if (groups_[g].frequency == 0.0) {
      phases[g] = Complex(1.0);
    } else {
      const double arg = groups_[g].frequency * t;
      phases[g] = Complex(std::cos(arg), std::sin(arg));
    }
  }
}

void CompiledHamiltonian::apply(double t, const StateVector& psi, StateVector& out,
                                Execution exec) const {
  // Small fixed buffer: the model has at most a few dozen distinct frequencies.
  constexpr std::size_t kInline = 32;
  std::array<Complex, kInline> inline_phases;
  std::vector<Complex> heap_phases;
  Complex* phases = inline_phases.data();
  if (groups_.size() > kInline) {
    heap_phases.resize(groups_.size());
    phases = heap_phases.data();
  }
  fill_phases(t, phases);

  const auto dim = static_cast<Eigen::Index>(dimension_);
  out.resize(dim);
  if (exec == Execution::serial) {
    for (Eigen::Index row = 0; row < dim; ++row) {
      out(row) = row_product(groups_, phases, decay_, psi, row);
    }
  } else {
#pragma omp parallel for schedule(static) num_threads(max_workers())
    for (Eigen::Index row = 0; row < dim; ++row) {
      out(row) = row_product(groups_, phases, decay_, psi, row);
    }
  }
}

void CompiledHamiltonian::apply(double t, const DensityMatrix& rho, DensityMatrix& out) const {
  std::vector<Complex> phases(groups_.size());
  fill_phases(t, phases.data());
  out = decay_.asDiagonal() * rho;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    out.noalias() += phases[g] * (groups_[g].op * rho);
  }
}

OperatorMatrix CompiledHamiltonian::at(double t) const {
  const auto dim = static_cast<Eigen::Index>(dimension_);
  OperatorMatrix h(dim, dim);
  for (const auto& g : groups_) {
    h += std::exp(Complex(0.0, g.frequency * t)) * g.op;
  }
  std::vector<Eigen::Triplet<Complex>> diag;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (decay_(i) != Complex(0.0)) diag.emplace_back(static_cast<int>(i), static_cast<int>(i), decay_(i));
  }
  OperatorMatrix d(dim, dim);
  d.setFromTriplets(diag.begin(), diag.end());
  h += d;
  return h;
}

namespace {

struct Ladder {
  OperatorMatrix b0, b1, b2, pair_dag;
};

Ladder ladder(const Basis& basis) {
  return {annihilator(basis, Mode::b0), annihilator(basis, Mode::b1),
          annihilator(basis, Mode::b2), creator(basis, Mode::pair)};
}

OperatorMatrix product(const OperatorMatrix& a, const OperatorMatrix& b, const OperatorMatrix& c) {
  OperatorMatrix bc = b * c;
  OperatorMatrix abc = a * bc;
  abc.prune(Complex(0.0));
  return abc;
}

void add_drives(HamiltonianTerms& h, const DerivedParams& dp, const Ladder& ops) {
  const double delta = dp.params.delta;
  h.add_with_conjugate(dp.omega_drive_0, delta - dp.e0, ops.b0, "drive b0");
  h.add_with_conjugate(dp.omega_drive_1, delta - dp.e1, ops.b1, "drive b1");
  h.add_with_conjugate(dp.omega_drive_2, delta - dp.e2, ops.b2, "drive b2");
}

void add_cavity_decay(HamiltonianTerms& h, const DerivedParams& dp, bool bright) {
  h.add_decay(Mode::b0, dp.k0);
  if (bright) {
    h.add_decay(Mode::b1, dp.k1);
    h.add_decay(Mode::b2, dp.k2);
  }
}

void warn_on_margin(HamiltonianTerms& h, const DerivedParams& dp, double threshold) {
  if (dp.rwa_margin < threshold) {
    std::ostringstream msg;
    msg << "rotating-wave margin " << dp.rwa_margin << " is below " << threshold;
    h.warnings.push_back(msg.str());
  }
}

HamiltonianTerms build_interaction_picture(const DerivedParams& dp, const Basis& basis,
                                           bool blockade) {
  HamiltonianTerms h(basis);
  const Ladder ops = ladder(basis);
  if (blockade) {
    h.add_with_conjugate(dp.lambda_blockade, 0.0, product(ops.pair_dag, ops.b0, ops.b0),
                         "p+ b0 b0");
    h.add_with_conjugate(dp.chi_bright_bright, -2.0 * dp.e1,
                         product(ops.pair_dag, ops.b1, ops.b1), "p+ b1 b1");
    h.add_with_conjugate(dp.chi_bright_bright, -2.0 * dp.e2,
                         product(ops.pair_dag, ops.b2, ops.b2), "p+ b2 b2");
    h.add_with_conjugate(-dp.chi_dark_bright, -dp.e1, product(ops.pair_dag, ops.b1, ops.b0),
                         "p+ b1 b0");
    h.add_with_conjugate(-dp.chi_dark_bright, -dp.e2, product(ops.pair_dag, ops.b2, ops.b0),
                         "p+ b2 b0");
    // E1 + E2 = 0 leaves this cross term static.
    h.add_with_conjugate(dp.chi_bright_bright, -(dp.e1 + dp.e2),
                         product(ops.pair_dag, ops.b2, ops.b1), "p+ b2 b1");
  }
  add_drives(h, dp, ops);
  add_cavity_decay(h, dp, true);
  return h;
}

HamiltonianTerms build_dark_sector(const DerivedParams& dp, const Basis& basis, bool bright_decay,
                                   double threshold) {
  HamiltonianTerms h(basis);
  const OperatorMatrix b0 = annihilator(basis, Mode::b0);
  const OperatorMatrix pair_dag = creator(basis, Mode::pair);
  h.add_with_conjugate(dp.lambda_blockade, 0.0, product(pair_dag, b0, b0), "p+ b0 b0");
  h.add_with_conjugate(dp.omega_drive_0, dp.params.delta - dp.e0, b0, "drive b0");
  add_cavity_decay(h, dp, bright_decay);
  warn_on_margin(h, dp, threshold);
  return h;
}

}  // namespace

HamiltonianTerms build_h_int(const DerivedParams& dp, const Basis& basis) {
  return build_interaction_picture(dp, basis, true);
}

HamiltonianTerms build_h_eit(const DerivedParams& dp, const Basis& basis) {
  return build_interaction_picture(dp, basis, false);
}

HamiltonianTerms build_h_rwa(const DerivedParams& dp, const Basis& basis, double rwa_threshold) {
  return build_dark_sector(dp, basis, true, rwa_threshold);
}

HamiltonianTerms build_h_eff(const DerivedParams& dp, const Basis& basis, double rwa_threshold) {
  return build_dark_sector(dp, basis, false, rwa_threshold);
}

HamiltonianTerms add_atomic_decay(HamiltonianTerms h, const DerivedParams& dp) {
  h.add_decay(Mode::b0, dp.params.gamma_r);
  h.add_decay(Mode::b1, dp.params.gamma_e);
  h.add_decay(Mode::b2, dp.params.gamma_e);
  return h;
}

HamiltonianTerms build_hamiltonian(HamiltonianKind kind, const DerivedParams& dp,
                                   const Basis& basis, bool atomic_decay) {
  HamiltonianTerms h = [&] {
    switch (kind) {
      case HamiltonianKind::full: return build_h_int(dp, basis);
      case HamiltonianKind::rwa: return build_h_rwa(dp, basis);
      case HamiltonianKind::eff: return build_h_eff(dp, basis);
      case HamiltonianKind::eit: return build_h_eit(dp, basis);
    }
    throw std::invalid_argument("unknown hamiltonian kind");
  }();
  return atomic_decay ? add_atomic_decay(std::move(h), dp) : h;
}

SingleExcitationSystem single_excitation_h1(const DerivedParams& dp) {
  const double collective = std::sqrt(dp.params.n_atoms) * dp.params.g;
  SingleExcitationSystem sys;
  sys.hamiltonian << 0.0, collective, 0.0,  //
      collective, 0.0, dp.control_rabi,     //
      0.0, dp.control_rabi, 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(sys.hamiltonian);
  sys.eigenvalues = solver.eigenvalues();
  sys.eigenvectors = solver.eigenvectors();
  return sys;
}

}  // namespace polariton
