#include <benchmark/benchmark.h>

#include "qplab/cocycles.hpp"
#include "qplab/cohomology.hpp"
#include "qplab/kotani.hpp"
#include "qplab/linalg.hpp"
#include "qplab/spectrum.hpp"

using namespace qplab;

namespace {

const Frequency kGolden = Frequency::golden();

void BM_LyapunovSchrodinger(benchmark::State& state) {
  const auto spec = CocycleSpec::schrodinger(kGolden, TrigPolynomial::cosine(2.0), 0.3, 0.1);
  const auto phases = phase_lattice(0.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_spectrum(spec, state.range(0), phases, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LyapunovSchrodinger)->Arg(1000)->Arg(10000);

void BM_LyapunovDual(benchmark::State& state) {
  const auto spec = CocycleSpec::dual(kGolden, TrigPolynomial::two_cosine(3.0, 0.3), TrigPolynomial::cosine(1.0), 0.5);
  const auto phases = phase_lattice(0.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_spectrum(spec, state.range(0), phases, 4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LyapunovDual)->Arg(1000)->Arg(10000);

void BM_BandedEigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BandedHermitian h(n, 2);
  for (int i = 0; i < n; ++i) h.lower[0][i] = 2.0 * std::cos(kTwoPi * 0.618 * i);
  for (int i = 0; i + 1 < n; ++i) h.lower[1][i] = 3.0;
  for (int i = 0; i + 2 < n; ++i) h.lower[2][i] = 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(eigh_banded(h, false));
}
BENCHMARK(BM_BandedEigenvalues)->Arg(400)->Arg(1600);

void BM_TruncatedSpectrum(benchmark::State& state) {
  const auto phases = phase_lattice(0.0, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(truncated_spectrum(SchrodingerOperator{TrigPolynomial::cosine(2.0)},
                                                kGolden.value_d(), static_cast<int>(state.range(0)), phases));
  }
}
BENCHMARK(BM_TruncatedSpectrum)->Arg(400)->Arg(987);

void BM_RiccatiM(benchmark::State& state) {
  const auto hop = TrigPolynomial::two_cosine(3.0, 0.3);
  const auto w = TrigPolynomial::cosine(1.0);
  RiccatiOptions o;
  o.n_tail = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(riccati_M(hop, w, kGolden.value_d(), cplx(0.5, 0.1), 0.3, o));
}
BENCHMARK(BM_RiccatiM)->Arg(200)->Arg(800);

void BM_SolveTruncated(benchmark::State& state) {
  const auto psi = AnalyticObservable::geometric(0.6, 0.5);
  const auto cf = cf_expand(kGolden, 30);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_truncated(psi, kGolden, cf, static_cast<std::size_t>(state.range(0)), 0.5));
  }
}
BENCHMARK(BM_SolveTruncated)->Arg(5)->Arg(20);

}  // namespace
BENCHMARK_MAIN();
