// Serial collection (b0kit::reference) against the table-driven OpenMP
// kernels on the same groups. Argument: family member index at p = 3 for
// the 243-element groups, or 5 for G(1|5).

#include <benchmark/benchmark.h>

#include "b0kit/bogomolov.hpp"
#include "b0kit/families.hpp"
#include "b0kit/kernels.hpp"
#include "b0kit/reference.hpp"

using namespace b0kit;
using families::Family;
using kernels::PairStrategy;

namespace {

PcPresentation group_for(std::int64_t arg) {
  switch (arg) {
    case 0: return families::build({Family::G243_28, 3, 0});
    case 1: return families::build({Family::G243_30, 3, 0});
    default: return families::build({Family::G1, 5, 0});
  }
}

void BM_ClassesReference(benchmark::State& state) {
  PcGroup g(group_for(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::conjugacy_classes(g));
}

void BM_ClassesKernel(benchmark::State& state) {
  PcGroup g(group_for(state.range(0)));
  for (auto _ : state) {
    kernels::GroupTables t(g);
    benchmark::DoNotOptimize(kernels::conjugacy_classes(t));
  }
}

void BM_PairsReference(benchmark::State& state) {
  PcGroup g(group_for(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::commuting_pair_count(g, PairStrategy::ConjReduced));
}

void BM_PairsKernel(benchmark::State& state) {
  PcGroup g(group_for(state.range(0)));
  for (auto _ : state) {
    kernels::GroupTables t(g);
    benchmark::DoNotOptimize(kernels::commuting_pair_count(t, PairStrategy::ConjReduced));
  }
}

void BM_B0Reference(benchmark::State& state) {
  const auto p = group_for(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::b0(p, PairStrategy::ConjReduced));
}

void BM_B0Kernel(benchmark::State& state) {
  const auto p = group_for(state.range(0));
  bogomolov::Options opt;
  opt.strategy = PairStrategy::ConjReduced;
  for (auto _ : state) benchmark::DoNotOptimize(bogomolov::b0(p, opt));
}

void BM_B0KernelThreads(benchmark::State& state) {
  const auto p = group_for(2);
  kernels::set_thread_count(static_cast<int>(state.range(0)));
  bogomolov::Options opt;
  opt.strategy = PairStrategy::ConjReduced;
  for (auto _ : state) benchmark::DoNotOptimize(bogomolov::b0(p, opt));
  kernels::set_thread_count(0);
}

}  // namespace

BENCHMARK(BM_ClassesReference)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassesKernel)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairsReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairsKernel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_B0Reference)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_B0Kernel)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_B0KernelThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
