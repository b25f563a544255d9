#include "evtforge/geometry.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_ProjectToIwe(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5), z(1.0, 4.0);
  evtforge::PointCloud3D cloud;
  for (int i = 0; i < 500000; ++i) {
    cloud.points.emplace_back(u(rng), u(rng), z(rng));
    cloud.polarity.push_back(i % 2 ? evtforge::Polarity::Positive : evtforge::Polarity::Negative);
    cloud.source_t.push_back(0);
  }
  const evtforge::CameraModel cam(200, 200, 172.5, 129.5);
  evtforge::IweOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = evtforge::project_to_iwe(cloud, cam, 346, 260, opts);
    benchmark::DoNotOptimize(r.image.accum.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cloud.size()));
}
BENCHMARK(BM_ProjectToIwe)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
