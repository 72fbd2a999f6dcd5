// Serial vs parallel timings of the three parallel kernels.
#include <benchmark/benchmark.h>

#include "lobound/certificate.hpp"
#include "lobound/primal.hpp"

using namespace lobound;

namespace {

void BM_VerifySerial(benchmark::State& state) {
  const auto ns = cert::ns_certificate();
  for (auto _ : state) benchmark::DoNotOptimize(cert::serial::verify(ns, static_cast<int>(state.range(0)), 500, 1e-10));
}

void BM_VerifyParallel(benchmark::State& state) {
  const auto ns = cert::ns_certificate();
  for (auto _ : state) benchmark::DoNotOptimize(cert::verify(ns, static_cast<int>(state.range(0)), 500, 1e-10));
}

cert::FindOptions find_options(const benchmark::State& state) {
  cert::FindOptions o;
  o.t_points = static_cast<int>(state.range(0));
  o.k_max = 200;
  return o;
}

void BM_FindSerial(benchmark::State& state) {
  const auto gate = fock::gate_sign(3);
  for (auto _ : state) benchmark::DoNotOptimize(cert::serial::find_certificate(gate, find_options(state)));
}

void BM_FindParallel(benchmark::State& state) {
  const auto gate = fock::gate_sign(3);
  for (auto _ : state) benchmark::DoNotOptimize(cert::find_certificate(gate, find_options(state)));
}

primal::SearchOptions search_options(const benchmark::State& state) {
  primal::SearchOptions o;
  o.n = 2;
  o.restarts = static_cast<int>(state.range(0));
  o.seed = 7;
  return o;
}

void BM_SearchSerial(benchmark::State& state) {
  const auto gate = fock::gate_ns();
  for (auto _ : state) benchmark::DoNotOptimize(primal::serial::outer_search(gate, search_options(state)));
}

void BM_SearchParallel(benchmark::State& state) {
  const auto gate = fock::gate_ns();
  for (auto _ : state) benchmark::DoNotOptimize(primal::outer_search(gate, search_options(state)));
}

}  // namespace

BENCHMARK(BM_VerifySerial)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifyParallel)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FindSerial)->Arg(201)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FindParallel)->Arg(201)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SearchSerial)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SearchParallel)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
