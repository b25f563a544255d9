#include "evtforge/volume.hpp"

#include "evtforge/binary_io.hpp"
#include "evtforge/error.hpp"
#include "evtforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evtforge {

double EventVolume::sum() const { return std::accumulate(data.begin(), data.end(), 0.0); }

EventVolume build_volume(const EventStream& stream, Timestamp t_start, Timestamp t_end, int bins,
                         const VolumeOptions& options) {
  if (bins < 2) throw DomainError("volume needs at least 2 bins");
  if (bins > 65535) throw DomainError("too many bins");
  if (t_start >= t_end) throw DomainError("volume window must satisfy t_start < t_end");
  if (options.shards == 0) throw DomainError("volume shard count must be positive");

  EventVolume vol;
  vol.width = stream.width;
  vol.height = stream.height;
  vol.bins = bins;
  vol.t_start = t_start;
  vol.t_end = t_end;
  const std::size_t plane = static_cast<std::size_t>(vol.width) * vol.height;
  vol.data.assign(plane * static_cast<std::size_t>(bins), 0.0);

  const auto& ev = stream.events;
  const auto first = std::lower_bound(ev.begin(), ev.end(), t_start,
                                      [](const Event& e, Timestamp t) { return e.t < t; });
  const auto last = std::upper_bound(first, ev.end(), t_end,
                                     [](Timestamp t, const Event& e) { return t < e.t; });
  const auto n = static_cast<std::size_t>(last - first);
  if (n == 0) return vol;

  const double scale = static_cast<double>(bins - 1) / static_cast<double>(t_end - t_start);
  const std::size_t shards = std::min(options.shards, n);
  std::vector<std::vector<double>> partial(shards);

  run_sharded(shards, options.threads, [&](std::size_t s) {
    auto& acc = partial[s];
    acc.assign(vol.data.size(), 0.0);
    const auto [begin, end] = shard_range(n, shards, s);
    for (std::size_t i = begin; i < end; ++i) {
      const Event& e = first[static_cast<std::ptrdiff_t>(i)];
      if (e.x >= vol.width || e.y >= vol.height) continue;
      const double tn = scale * static_cast<double>(e.t - t_start);
      const int lower = std::min(static_cast<int>(tn), bins - 1);
      const double frac = tn - lower;
      const double p = sign(e.p);
      const std::size_t px = static_cast<std::size_t>(e.y) * vol.width + e.x;
      acc[static_cast<std::size_t>(lower) * plane + px] += p * (1.0 - frac);
      if (frac > 0.0 && lower + 1 < bins) {
        acc[static_cast<std::size_t>(lower + 1) * plane + px] += p * frac;
      }
    }
  });

  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < acc.size(); ++i) vol.data[i] += acc[i];
  }
  return vol;
}

Timestamp default_window(double fps, int n_frames) {
  if (!(fps > 0.0)) throw DomainError("fps must be positive");
  if (n_frames < 1) throw DomainError("n_frames must be at least 1");
  return static_cast<Timestamp>(std::floor(static_cast<double>(n_frames) * kMicrosPerSecond / fps));
}

void write_volume(const std::filesystem::path& path, const EventVolume& volume) {
  GridHeader h;
  h.magic = {'E', 'V', 'O', 'L'};
  h.bins = static_cast<std::uint16_t>(volume.bins);
  h.height = static_cast<std::uint16_t>(volume.height);
  h.width = static_cast<std::uint16_t>(volume.width);
  h.t_start = volume.t_start;
  h.t_end = volume.t_end;
  write_grid(path, h, volume.data);
}

EventVolume read_volume(const std::filesystem::path& path) {
  GridFile grid = read_grid(path, {'E', 'V', 'O', 'L'});
  EventVolume vol;
  vol.width = grid.header.width;
  vol.height = grid.header.height;
  vol.bins = grid.header.bins;
  vol.t_start = grid.header.t_start;
  vol.t_end = grid.header.t_end;
  vol.data.assign(grid.values.begin(), grid.values.end());
  return vol;
}

}  // namespace evtforge
