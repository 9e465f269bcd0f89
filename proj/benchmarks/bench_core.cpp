#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "epcfg/epcfg.hpp"

namespace {

epcfg::LatentTensor random_latent(epcfg::Rng& rng, std::int64_t n) {
  std::vector<double> data(static_cast<std::size_t>(n));
  for (double& v : data) v = 4.0 * (2.0 * rng.uniform01() - 1.0);
  return epcfg::make_latent({n}, std::move(data));
}

void BM_energy(benchmark::State& state) {
  epcfg::Rng rng(1);
  const auto x = random_latent(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(epcfg::energy(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_energy)->Range(1 << 8, 1 << 16);

void BM_percentile(benchmark::State& state) {
  epcfg::Rng rng(2);
  const auto x = random_latent(rng, state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(epcfg::percentile(x.data(), 55.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_percentile)->Range(1 << 8, 1 << 16);

void BM_robust_energy(benchmark::State& state) {
  epcfg::Rng rng(3);
  const auto x = random_latent(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(epcfg::robust_energy(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_robust_energy)->Range(1 << 8, 1 << 16);

void BM_ep_cfg(benchmark::State& state) {
  epcfg::Rng rng(4);
  const auto x_c = random_latent(rng, state.range(0));
  const auto x_u = random_latent(rng, state.range(0));
  epcfg::GuidanceParams params;
  params.strength = 9.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(epcfg::ep_cfg(x_c, x_u, params));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ep_cfg)->Range(1 << 8, 1 << 16);

void BM_analytic_x0(benchmark::State& state) {
  const std::int64_t dim = 16;
  std::vector<epcfg::MixtureComponent> comps;
  for (int k = 0; k < 4; ++k)
    comps.push_back({0.25, std::vector<double>(dim, 0.5 * k), 0.8});
  const auto m = epcfg::MixtureModel::create(dim, comps);
  epcfg::Rng rng(5);
  const auto x_t = random_latent(rng, dim);
  for (auto _ : state)
    benchmark::DoNotOptimize(epcfg::analytic_x0(m, x_t, 0.5));
}
BENCHMARK(BM_analytic_x0);

void BM_sample_trajectory(benchmark::State& state) {
  const auto cond = epcfg::MixtureModel::single_gaussian(
      std::vector<double>(8, 2.0), 0.5);
  const auto uncond = epcfg::MixtureModel::create(
      8, {epcfg::MixtureComponent{0.5, std::vector<double>(8, 2.0), 0.5},
          epcfg::MixtureComponent{0.5, std::vector<double>(8, -2.0), 0.5}});
  const auto sched = epcfg::vp_schedule(50);
  epcfg::GuidanceParams params;
  params.strength = 9.0;
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(epcfg::sample_trajectory(
        cond, uncond, sched, params, epcfg::GuidanceSpace::Epsilon, seed++));
}
BENCHMARK(BM_sample_trajectory);

}  // namespace

BENCHMARK_MAIN();
