#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "rtr/analysis.hpp"
#include "rtr/mna.hpp"
#include "rtr/montecarlo.hpp"
#include "rtr/netlist.hpp"
#include "rtr/timedomain.hpp"
#include "rtr/topologies.hpp"

namespace {

constexpr double pi = 3.14159265358979323846;

void BM_LuSolve(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  rtr::ComplexMatrix a(n);
  std::vector<rtr::Complex> b(n);
  std::uint64_t rng = 7;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      a.at(i, j) = {rtr::uniform01(rng) - 0.5, rtr::uniform01(rng) - 0.5};
    a.at(i, i) += double(n);  // diagonally dominant, never trips the pivot guard
    b[i] = {rtr::uniform01(rng), rtr::uniform01(rng)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(rtr::lu_solve(a, b));
}
BENCHMARK(BM_LuSolve)->Arg(6)->Arg(16)->Arg(64);

void BM_SolveAc(benchmark::State& state) {
  const rtr::Circuit circuit = rtr::build_rtr(rtr::RtrDesign::reference_nonideal());
  const double omega = 2.0 * pi * 1234.0;
  for (auto _ : state) benchmark::DoNotOptimize(rtr::solve_ac(circuit, omega));
}
BENCHMARK(BM_SolveAc);

void BM_AcSweep(benchmark::State& state) {
  const rtr::Circuit circuit = rtr::build_rtr(rtr::RtrDesign::reference_nonideal());
  const rtr::FrequencyGrid grid{20.0, 20000.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(rtr::ac_sweep(circuit, "lf", "hf", grid));
}
BENCHMARK(BM_AcSweep)->Arg(100)->Arg(500);

void BM_McRun(benchmark::State& state) {
  rtr::ToleranceSpec spec;
  spec.tol_fraction = 0.05;
  spec.n_samples = static_cast<int>(state.range(0));
  const rtr::FrequencyGrid grid{20.0, 20000.0, 100};
  const rtr::RtrDesign nominal = rtr::RtrDesign::reference_nonideal();
  for (auto _ : state) benchmark::DoNotOptimize(rtr::mc_run(nominal, spec, grid));
}
BENCHMARK(BM_McRun)->Arg(10)->Arg(50);

void BM_FirFilter(benchmark::State& state) {
  const rtr::FirPair pair = rtr::design_fir(rtr::FirDesign::reference());
  const rtr::Signal input =
      rtr::synth_multitone({{100.0, 1.0, 0.0}, {3000.0, 0.5, 30.0}}, 48000.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(rtr::fir_filter(pair.h_lp, input));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
}
BENCHMARK(BM_FirFilter);

void BM_ParseNetlist(benchmark::State& state) {
  const std::string text = rtr::rtr_netlist(rtr::RtrDesign::reference_nonideal());
  for (auto _ : state) benchmark::DoNotOptimize(rtr::parse_netlist(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseNetlist);

}  // namespace

BENCHMARK_MAIN();
