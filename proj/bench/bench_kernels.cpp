// Serial reference against the OpenMP path for the two parallel kernels: the
// row-parallel H(t)ψ product and the point-parallel cosθ sweep.

#include <benchmark/benchmark.h>

#include "polariton/observables.hpp"

using namespace polariton;

namespace {

void apply_hamiltonian(benchmark::State& state, Execution exec) {
  const Basis basis(Truncation::hard_core(static_cast<int>(state.range(0))));
  const DerivedParams dp = derive_params(PhysicalParams::dimensionless_reference());
  const CompiledHamiltonian h(build_hamiltonian(HamiltonianKind::full, dp, basis, true));
  const StateVector psi = StateVector::Constant(static_cast<Eigen::Index>(basis.size()), Complex(0.1, 0.2));
  StateVector out(psi.size());
  double t = 0.0;
  for (auto _ : state) {
    h.apply(t, psi, out, exec);
    benchmark::DoNotOptimize(out.data());
    t += 1e-3;
  }
  state.counters["dim"] = static_cast<double>(basis.size());
}

void sweep(benchmark::State& state, Execution exec) {
  SweepConfig cfg;
  cfg.kind = HamiltonianKind::eff;
  cfg.integrator.t_end = 200.0;
  cfg.execution = exec;
  const std::vector<double> grid{0.04, 0.1, 0.2, 0.3};
  for (auto _ : state) {
    const SweepResult r = sweep_costheta(PhysicalParams::dimensionless_reference(), grid, cfg);
    benchmark::DoNotOptimize(r.points.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(apply_hamiltonian, serial, Execution::serial)->Arg(4)->Arg(12)->Arg(24)->Arg(40);
BENCHMARK_CAPTURE(apply_hamiltonian, openmp, Execution::openmp)->Arg(4)->Arg(12)->Arg(24)->Arg(40);
BENCHMARK_CAPTURE(sweep, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, openmp, Execution::openmp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
