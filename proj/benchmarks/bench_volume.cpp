#include "evtforge/volume.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

namespace {

evtforge::EventStream random_stream(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> ux(0, 345), uy(0, 259), up(0, 1);
  std::uniform_int_distribution<evtforge::Timestamp> ut(0, 166666);
  evtforge::EventStream s;
  s.width = 346;
  s.height = 260;
  s.events.resize(n);
  for (auto& e : s.events) {
    e = {static_cast<std::uint16_t>(ux(rng)), static_cast<std::uint16_t>(uy(rng)), ut(rng),
         up(rng) ? evtforge::Polarity::Positive : evtforge::Polarity::Negative};
  }
  std::sort(s.events.begin(), s.events.end(), evtforge::event_less);
  return s;
}

void BM_BuildVolume(benchmark::State& state) {
  const auto s = random_stream(1000000);
  evtforge::VolumeOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto v = evtforge::build_volume(s, 0, 166666, 5, opts);
    benchmark::DoNotOptimize(v.data.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.size()));
}
BENCHMARK(BM_BuildVolume)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
