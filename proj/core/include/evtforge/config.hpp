#pragma once

#include "evtforge/losses.hpp"
#include "evtforge/sampler.hpp"
#include "evtforge/types.hpp"
#include "evtforge/volume.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace evtforge {

/// Every tunable of the frames -> events -> volumes -> losses pipeline.
/// Serialized as `key = value` lines; parse_config(print_config(c)) == c.
struct PipelineConfig {
  double contrast_c = 0.15;
  /// Step constant of the adaptive sampler. Unset means contrast_c.
  std::optional<double> sampler_c;
  Timestamp dt_min_us = 100;
  Timestamp dt_max_us = 0;  // 0: two source-frame intervals
  double rate_floor = 1e-6;
  double eps_log = kDefaultEpsLog;
  double fps = 30.0;
  int bins = kDefaultBins;
  Timestamp window_us = 166666;
  double lambda = kDefaultLambda;
  int scales = kDefaultScales;
  int threads = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;
  std::size_t shards = kDefaultVolumeShards;

  SamplerConfig sampler() const;
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

std::string print_config(const PipelineConfig& config);

/// Starts from `base` and applies each `key = value` line. Blank lines and
/// lines starting with '#' are skipped; unknown keys are errors.
PipelineConfig parse_config(const std::string& text, PipelineConfig base = {});

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

}  // namespace evtforge
