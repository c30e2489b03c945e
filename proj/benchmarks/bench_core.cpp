#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "jcmss/entropy.hpp"
#include "jcmss/jcm.hpp"
#include "jcmss/specfun.hpp"
#include "jcmss/superstat.hpp"

namespace {

const double kLn11 = std::log(11.0);

void BM_HurwitzZeta(benchmark::State& state) {
  const double s = 1.0 + static_cast<double>(state.range(0)) / 8.0;
  for (auto _ : state) benchmark::DoNotOptimize(jcmss::hurwitz_zeta(s, 3.2));
}
BENCHMARK(BM_HurwitzZeta)->Arg(2)->Arg(8)->Arg(40);

void BM_HurwitzZetaScaledNearGibbs(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(jcmss::hurwitz_zeta_scaled(1e6, 1e6 / kLn11));
}
BENCHMARK(BM_HurwitzZetaScaledNearGibbs);

jcmss::PhotonDistribution gamma_weights(double q, std::size_t max_levels) {
  const auto d = jcmss::Deformation::tsallis(q);
  return jcmss::photon_weights_gamma(
      jcmss::GammaSuperstat(d, jcmss::calibrate_beta_star(d, kLn11)),
      jcmss::Truncation{1e-8, max_levels});
}

void BM_EvolutionEvaluate(benchmark::State& state) {
  const auto dist = gamma_weights(1.6, static_cast<std::size_t>(state.range(0)));
  const jcmss::Evolution evolution(jcmss::ModelParams::from_detuning(0.0, 2.0),
                                   jcmss::AtomInit(0.0), dist);
  jcmss::EvolvedState out;
  double t = 0.0;
  for (auto _ : state) {
    evolution.evaluate(t, out);
    benchmark::DoNotOptimize(out.coeff_A.data());
    t += 0.01;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(dist.n_max()));
}
BENCHMARK(BM_EvolutionEvaluate)->Arg(64)->Arg(1024)->Arg(65536);

void BM_EntropyTrace(benchmark::State& state) {
  const auto dist = gamma_weights(1.4, 4096);
  const auto form = static_cast<jcmss::FieldEntropyForm>(state.range(0));
  const auto grid = jcmss::uniform_time_grid(25.0, 500);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jcmss::entropy_trace(jcmss::ModelParams::from_detuning(0.0, 2.0),
                                                  jcmss::AtomInit(0.0), dist,
                                                  jcmss::EntropyKind::tsallis(1.4), form, grid));
  }
}
BENCHMARK(BM_EntropyTrace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
