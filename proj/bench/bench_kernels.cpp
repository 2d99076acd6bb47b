#include "tcm/dynamics.hpp"
#include "tcm/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace tcm;

namespace {

PhotonDistribution coherent(double nbar) {
  DistSpec s{DistKind::coherent};
  s.beta = std::sqrt(nbar);
  return make_distribution(s);
}

std::vector<BlockJob> jobs_for(const PhotonDistribution& d) {
  std::vector<BlockJob> jobs;
  for (std::size_t n = 0; n < d.probs.size(); ++n) jobs.push_back({static_cast<long>(n), d.probs[n]});
  return jobs;
}

const std::vector<SpectralTerm>& absorption_terms() {
  static const std::vector<SpectralTerm> terms = absorption_spectrum(coherent(100.0), 100, 0.0).terms;
  return terms;
}

template <auto Kernel>
void sin2_series(benchmark::State& state) {
  const std::vector<double> times = uniform_times(200.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(absorption_terms(), times));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(absorption_terms().size()) * state.range(0));
}

template <auto Build>
void term_build(benchmark::State& state) {
  const std::vector<BlockJob> jobs = jobs_for(coherent(static_cast<double>(state.range(1))));
  const int n_tlm = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Build(Mode::absorption, n_tlm, 0.0, jobs, 1e-16 * n_tlm, nullptr));
}

}  // namespace

BENCHMARK(sin2_series<sin2_series_serial>)->Name("sin2_series/serial")->Arg(400)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(sin2_series<sin2_series_parallel>)->Name("sin2_series/parallel")->Arg(400)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(term_build<build_terms_serial>)->Name("term_build/serial")->Args({10, 25})->Args({100, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(term_build<build_terms_parallel>)->Name("term_build/parallel")->Args({10, 25})->Args({100, 100})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
