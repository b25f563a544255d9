#include "evtforge/evtio.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

namespace {

evtforge::EventStream ramp_stream(std::size_t n) {
  evtforge::EventStream s;
  s.width = 640;
  s.height = 480;
  s.events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.events.push_back({static_cast<std::uint16_t>(i % 640), static_cast<std::uint16_t>((i / 640) % 480), i,
                        i % 3 ? evtforge::Polarity::Positive : evtforge::Polarity::Negative});
  }
  return s;
}

void BM_WriteRead(benchmark::State& state) {
  const auto s = ramp_stream(1000000);
  const auto path = std::filesystem::temp_directory_path() / "evtforge-bench.evts";
  for (auto _ : state) {
    evtforge::write_stream(s, path);
    auto back = evtforge::read_stream(path);
    benchmark::DoNotOptimize(back.events.data());
  }
  std::filesystem::remove(path);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.size()));
}
BENCHMARK(BM_WriteRead)->Unit(benchmark::kMillisecond);

void BM_WindowedRead(benchmark::State& state) {
  const auto s = ramp_stream(1000000);
  const auto path = std::filesystem::temp_directory_path() / "evtforge-bench-win.evts";
  evtforge::write_stream(s, path);
  evtforge::Timestamp t0 = 0;
  for (auto _ : state) {
    auto w = evtforge::read_stream(path, evtforge::TimeWindow{t0, t0 + 10000});
    benchmark::DoNotOptimize(w.events.data());
    t0 = (t0 + 77777) % 990000;
  }
  std::filesystem::remove(path);
}
BENCHMARK(BM_WindowedRead)->Unit(benchmark::kMicrosecond);

}  // namespace
