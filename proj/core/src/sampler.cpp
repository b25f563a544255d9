#include "evtforge/sampler.hpp"

#include "evtforge/error.hpp"
#include "evtforge/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace evtforge {

void SamplerConfig::validate() const {
  if (!(contrast_c > 0.0)) throw DomainError("contrast_c must be positive");
  if (dt_min == 0) throw DomainError("dt_min must be positive");
  if (dt_max != 0 && dt_max < dt_min) throw DomainError("dt_max must be >= dt_min");
  if (!(rate_floor > 0.0)) throw DomainError("rate_floor must be positive");
}

double brightness_rate(const LogFrame& prev, const LogFrame& next, double rate_floor,
                       int threads) {
  if (prev.t >= next.t) throw DomainError("brightness_rate needs prev.t < next.t");
  if (prev.width != next.width || prev.height != next.height) {
    throw DomainError("brightness_rate needs frames of equal resolution");
  }
  const std::size_t n = prev.log_l.size();
  constexpr std::size_t kTile = 1 << 16;
  const std::size_t shards = std::max<std::size_t>(1, (n + kTile - 1) / kTile);
  std::vector<double> partial(shards, 0.0);
  run_sharded(shards, threads, [&](std::size_t s) {
    const auto [begin, end] = shard_range(n, shards, s);
    double m = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      m = std::max(m, std::abs(next.log_l[i] - prev.log_l[i]));
    }
    partial[s] = m;
  });
  const double max_change = *std::max_element(partial.begin(), partial.end());
  const double dt_s = static_cast<double>(next.t - prev.t) / kMicrosPerSecond;
  return std::max(max_change / dt_s, rate_floor);
}

Timestamp next_sample_time(Timestamp t_k, double rate, const SamplerConfig& cfg) {
  if (!(rate > 0.0)) throw DomainError("sampling rate must be positive");
  if (cfg.dt_max == 0) throw DomainError("dt_max must be resolved before stepping");
  const double dt_us = cfg.contrast_c / rate * kMicrosPerSecond;
  const double clamped = std::clamp(dt_us, static_cast<double>(cfg.dt_min),
                                    static_cast<double>(cfg.dt_max));
  const auto step = static_cast<Timestamp>(std::llround(clamped));
  return t_k + std::max<Timestamp>(step, 1);
}

SamplerConfig resolve_dt_max(const SamplerConfig& cfg, std::span<const LogFrame> frames) {
  SamplerConfig out = cfg;
  if (out.dt_max != 0) return out;
  Timestamp widest = 0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    widest = std::max(widest, frames[i].t - frames[i - 1].t);
  }
  out.dt_max = std::max(2 * widest, out.dt_min);
  return out;
}

SamplePlan build_plan(std::span<const LogFrame> frames, const SamplerConfig& cfg_in,
                      int threads) {
  if (frames.size() < 2) throw DomainError("build_plan needs at least 2 frames");
  cfg_in.validate();
  const SamplerConfig cfg = resolve_dt_max(cfg_in, frames);

  std::vector<double> segment_rate(frames.size() - 1);
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    segment_rate[k] = brightness_rate(frames[k], frames[k + 1], cfg.rate_floor, threads);
  }

  const Timestamp first = frames.front().t;
  const Timestamp last = frames.back().t;
  SamplePlan plan;
  plan.times.push_back(first);
  std::size_t seg = 0;
  Timestamp t = first;
  while (t < last) {
    while (seg + 2 < frames.size() && frames[seg + 1].t <= t) ++seg;
    const Timestamp next = next_sample_time(t, segment_rate[seg], cfg);
    t = std::min(next, last);
    plan.times.push_back(t);
  }
  return plan;
}

LogFrame interpolate_log_frame(std::span<const LogFrame> frames, Timestamp t) {
  if (frames.empty()) throw DomainError("no frames to interpolate");
  if (t < frames.front().t || t > frames.back().t) {
    throw DomainError("interpolation time outside the frame range");
  }
  auto upper = std::lower_bound(frames.begin(), frames.end(), t,
                                [](const LogFrame& f, Timestamp v) { return f.t < v; });
  if (upper->t == t) return *upper;
  const LogFrame& b = *upper;
  const LogFrame& a = *(upper - 1);
  const double w = static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
  LogFrame out{a.width, a.height, std::vector<double>(a.log_l.size()), t};
  for (std::size_t i = 0; i < out.log_l.size(); ++i) {
    out.log_l[i] = a.log_l[i] + w * (b.log_l[i] - a.log_l[i]);
  }
  return out;
}

std::vector<LogFrame> render_plan(std::span<const LogFrame> frames, const SamplePlan& plan) {
  std::vector<LogFrame> out;
  out.reserve(plan.times.size());
  for (Timestamp t : plan.times) out.push_back(interpolate_log_frame(frames, t));
  return out;
}

}  // namespace evtforge
