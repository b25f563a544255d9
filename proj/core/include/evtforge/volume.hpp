#pragma once

#include "evtforge/types.hpp"

#include <filesystem>
#include <vector>

namespace evtforge {

inline constexpr int kDefaultBins = 5;
/// Fixed shard count for accumulation. Results are bit-identical for any
/// thread count as long as this stays the same.
inline constexpr std::size_t kDefaultVolumeShards = 8;

struct EventVolume {
  int width = 0;
  int height = 0;
  int bins = 0;
  Timestamp t_start = 0;
  Timestamp t_end = 0;
  std::vector<double> data;  // (b, y, x) row-major

  double at(int b, int y, int x) const { return data[index(b, y, x)]; }
  std::size_t index(int b, int y, int x) const {
    return (static_cast<std::size_t>(b) * height + static_cast<std::size_t>(y)) * width +
           static_cast<std::size_t>(x);
  }
  double sum() const;
};

struct VolumeOptions {
  std::size_t shards = kDefaultVolumeShards;
  int threads = 1;
};

/// Tent-kernel accumulation: each event in [t_start, t_end] adds
/// p * max(0, 1 - |b - t*|) to bin b at its pixel, with
/// t* = (bins - 1)(t - t_start) / (t_end - t_start). Requires events sorted
/// by timestamp.
EventVolume build_volume(const EventStream& stream, Timestamp t_start, Timestamp t_end,
                         int bins = kDefaultBins, const VolumeOptions& options = {});

/// n_frames / fps seconds, in whole microseconds (rounded down).
Timestamp default_window(double fps, int n_frames);

void write_volume(const std::filesystem::path& path, const EventVolume& volume);
/// Values are widened back from float32.
EventVolume read_volume(const std::filesystem::path& path);

}  // namespace evtforge
