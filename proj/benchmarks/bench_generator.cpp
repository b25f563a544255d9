#include "evtforge/generator.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

std::vector<evtforge::LogFrame> drifting_frames(int w, int h, int n) {
  std::vector<evtforge::LogFrame> frames;
  for (int k = 0; k < n; ++k) {
    evtforge::LogFrame f{w, h, std::vector<double>(static_cast<std::size_t>(w) * h), static_cast<evtforge::Timestamp>(k) * 1000};
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) f.log_l[static_cast<std::size_t>(y) * w + x] = std::sin(0.05 * (x + 3 * k)) + 0.3 * std::cos(0.07 * y);
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

void BM_Generate(benchmark::State& state) {
  const auto frames = drifting_frames(346, 260, 10);
  const int threads = static_cast<int>(state.range(0));
  std::size_t events = 0;
  for (auto _ : state) {
    auto s = evtforge::generate(frames, 0.15, 346, 260, threads);
    events = s.size();
    benchmark::DoNotOptimize(s.events.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * events));
}
BENCHMARK(BM_Generate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
