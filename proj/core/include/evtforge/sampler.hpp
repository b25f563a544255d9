#pragma once

#include "evtforge/ingest.hpp"
#include "evtforge/types.hpp"

#include <span>
#include <vector>

namespace evtforge {

struct SamplerConfig {
  double contrast_c = 0.15;       // log units
  Timestamp dt_min = 100;         // microseconds
  Timestamp dt_max = 0;           // microseconds; 0 = two source-frame intervals
  double rate_floor = 1e-6;       // log units per second

  /// Throws DomainError when a field is out of range. dt_max = 0 is
  /// accepted (resolved later against the frame spacing).
  void validate() const;
};

struct SamplePlan {
  std::vector<Timestamp> times;
};

/// Peak |d log L / dt| over all pixels, in log units per second, estimated
/// by a forward difference between two frames. Never returns less than
/// `rate_floor`.
double brightness_rate(const LogFrame& prev, const LogFrame& next, double rate_floor,
                       int threads = 1);

/// t_k + clamp(C / rate, dt_min, dt_max), rounded to the microsecond.
Timestamp next_sample_time(Timestamp t_k, double rate, const SamplerConfig& cfg);

/// Returns cfg with dt_max resolved to twice the largest source-frame
/// interval when it was left at 0.
SamplerConfig resolve_dt_max(const SamplerConfig& cfg, std::span<const LogFrame> frames);

/// Iterates the adaptive step from the first frame time to the last. The
/// rate used at time t comes from the pair of source frames bracketing t.
/// The final step is truncated to end exactly at the last frame time, so
/// only that interval may be shorter than dt_min.
SamplePlan build_plan(std::span<const LogFrame> frames, const SamplerConfig& cfg,
                      int threads = 1);

/// Log frame at time t by linear interpolation of log_l between the
/// bracketing source frames. t must lie within [first.t, last.t].
LogFrame interpolate_log_frame(std::span<const LogFrame> frames, Timestamp t);

/// interpolate_log_frame at every planned time.
std::vector<LogFrame> render_plan(std::span<const LogFrame> frames, const SamplePlan& plan);

}  // namespace evtforge
