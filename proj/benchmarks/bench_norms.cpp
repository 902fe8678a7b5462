#include <benchmark/benchmark.h>

#include "cknlab/inequality_lab.hpp"
#include "cknlab/k_functional.hpp"
#include "cknlab/norm_engine.hpp"

using namespace ckn;

namespace {

// Weighted L^2 norm; the range selects the dimension.
void BM_LebesgueRadial(benchmark::State& state) {
  const auto d = make_domain(static_cast<int>(state.range(0)), 1.0, 4.0);
  const auto u = make_power_bump(d, -0.5, 0.1);
  const QuadratureSpec q;
  for (auto _ : state) benchmark::DoNotOptimize(lebesgue_norm(u, 1.0, ReciprocalExponent(0.5), d, q).value);
}
BENCHMARK(BM_LebesgueRadial)->Arg(2)->Arg(3)->Arg(5);

void BM_LebesgueAngular(benchmark::State& state) {
  const auto d = make_domain(static_cast<int>(state.range(0)), 1.0, 2.0);
  const auto u = make_angular(make_radial_bump(d, 1.0), 2);
  const QuadratureSpec q;
  for (auto _ : state) benchmark::DoNotOptimize(lebesgue_norm(u, 0.0, ReciprocalExponent(0.5), d, q).value);
}
BENCHMARK(BM_LebesgueAngular)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_HolderSeminorm(benchmark::State& state) {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto u = state.range(0) ? make_angular(make_radial_bump(d, 1.0), 1) : make_radial_bump(d, 1.0);
  const QuadratureSpec q;
  for (auto _ : state) {
    benchmark::DoNotOptimize(holder_norm(u, 0.0, 0.5, d, q, HolderPart::SeminormOnly).value);
  }
}
BENCHMARK(BM_HolderSeminorm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KProfile(benchmark::State& state) {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto u = make_radial_bump(d, 1.0);
  KConfig cfg;
  cfg.use_cutoffs = state.range(0) != 0;
  const SpaceSpec x{0, ReciprocalExponent(0.5), 0.0}, y{0, ReciprocalExponent(0.0), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(k_profile(u, x, y, d, cfg).k_values.back());
}
BENCHMARK(BM_KProfile)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HardyEstimate(benchmark::State& state) {
  CknTuple t;
  t.n = 3;
  t.s_p = ReciprocalExponent(0.5);
  t = derive_tuple(InequalityKind::ClassicalHardy, t);
  FamilyDescriptor fam;
  fam.family = "power_bump";
  fam.domain = make_domain(3, 1.0, 100.0);
  fam.free = {{"beta", -1.5, 0.5, false}, {"cut_fraction", 0.05, 0.45, false}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_constant(InequalityKind::ClassicalHardy, t, fam, LabConfig{},
                                               OptimizerConfig{}).sup_ratio);
  }
}
BENCHMARK(BM_HardyEstimate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
