#include "evtforge/error.hpp"
#include "evtforge/sampler.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace evtforge {
namespace {

using oracle::make_log_frame;

TEST(BrightnessRate, IdenticalFramesHitFloor) {
  const auto a = make_log_frame(2, 2, 0, {0.1, 0.2, 0.3, 0.4});
  auto b = a;
  b.t = 33333;
  EXPECT_EQ(brightness_rate(a, b, 1e-6), 1e-6);
}

TEST(BrightnessRate, SinglePixelOverFrameInterval) {
  const auto a = make_log_frame(2, 1, 0, {0.0, 0.0});
  const auto b = make_log_frame(2, 1, 33333, {0.2, 0.0});
  EXPECT_NEAR(brightness_rate(a, b, 1e-6), 6.0, 1e-3);
  const auto c = make_log_frame(2, 1, 50000, {0.0, 0.3});
  EXPECT_DOUBLE_EQ(brightness_rate(a, c, 1e-6), 6.0);
}

TEST(BrightnessRate, MaxDominates) {
  const auto a = make_log_frame(2, 1, 0, {0.0, 0.0});
  const auto b = make_log_frame(2, 1, 1000000, {0.1, -0.3});
  EXPECT_DOUBLE_EQ(brightness_rate(a, b, 1e-6), 0.3);
}

TEST(BrightnessRate, ThreadCountIrrelevant) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> va(300 * 300), vb(300 * 300);
  for (auto& v : va) v = n(rng);
  for (auto& v : vb) v = n(rng);
  const auto a = make_log_frame(300, 300, 0, va);
  const auto b = make_log_frame(300, 300, 1000, vb);
  EXPECT_EQ(brightness_rate(a, b, 1e-6, 1), brightness_rate(a, b, 1e-6, 4));
}

TEST(NextSampleTime, Examples) {
  SamplerConfig cfg;
  cfg.dt_max = 100000;
  EXPECT_EQ(next_sample_time(0, 6.0, cfg), 25000u);
  EXPECT_EQ(next_sample_time(0, 1e-6, cfg), 100000u);
  EXPECT_EQ(next_sample_time(7, 1e6, cfg), 107u);
}

TEST(NextSampleTime, UnresolvedDtMaxThrows) {
  EXPECT_THROW(next_sample_time(0, 1.0, SamplerConfig{}), DomainError);
}

TEST(SamplerConfig, Validation) {
  SamplerConfig cfg;
  cfg.contrast_c = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.dt_min = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.dt_max = 50;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.rate_floor = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

std::vector<LogFrame> static_sequence(int n) {
  std::vector<LogFrame> frames;
  for (int i = 0; i < n; ++i) frames.push_back(make_log_frame(2, 2, i * 33333u, {0.5, 0.5, 0.5, 0.5}));
  return frames;
}

TEST(BuildPlan, StaticSequenceStridesAtDtMax) {
  const auto frames = static_sequence(10);
  const auto plan = build_plan(frames, SamplerConfig{});
  ASSERT_GE(plan.times.size(), 2u);
  EXPECT_EQ(plan.times.front(), 0u);
  EXPECT_EQ(plan.times.back(), frames.back().t);
  for (std::size_t i = 1; i + 1 < plan.times.size(); ++i) {
    EXPECT_EQ(plan.times[i] - plan.times[i - 1], 66666u);
  }
}

TEST(BuildPlan, TwoFramesContainEndpoints) {
  std::vector<LogFrame> frames{make_log_frame(1, 1, 0, {0.0}), make_log_frame(1, 1, 1000, {1.0})};
  const auto plan = build_plan(frames, SamplerConfig{});
  EXPECT_EQ(plan.times.front(), 0u);
  EXPECT_EQ(plan.times.back(), 1000u);
}

TEST(BuildPlan, DenserInsideFastInterval) {
  std::vector<LogFrame> frames;
  for (int i = 0; i < 6; ++i) {
    const double v = i < 3 ? 0.01 * i : 0.02 + 2.0 * (i - 2);
    frames.push_back(make_log_frame(1, 1, i * 33333u, {v}));
  }
  // frames 2..3 carry the fast change; later ones are fast as well, so make them slow again
  frames[4].log_l[0] = frames[3].log_l[0] + 0.01;
  frames[5].log_l[0] = frames[4].log_l[0] + 0.01;
  SamplerConfig cfg;
  const auto plan = build_plan(frames, cfg);
  const auto resolved = resolve_dt_max(cfg, frames);
  EXPECT_EQ(plan.times, oracle::scan_plan(frames, cfg.contrast_c, cfg.dt_min, resolved.dt_max,
                                          cfg.rate_floor));
  auto count_in = [&](Timestamp a, Timestamp b) {
    std::size_t n = 0;
    for (Timestamp t : plan.times) n += (t >= a && t < b);
    return n;
  };
  const std::size_t fast = count_in(frames[2].t, frames[3].t);
  EXPECT_GT(fast, count_in(frames[0].t, frames[2].t));
  EXPECT_GT(fast, count_in(frames[3].t, frames[5].t + 1));
}

TEST(BuildPlan, IntervalsWithinClamp) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LogFrame> frames;
    for (int i = 0; i < 8; ++i) frames.push_back(make_log_frame(2, 1, i * 20000u, {u(rng), u(rng)}));
    SamplerConfig cfg;
    cfg.dt_max = 30000;
    const auto plan = build_plan(frames, cfg);
    for (std::size_t i = 1; i < plan.times.size(); ++i) {
      const Timestamp d = plan.times[i] - plan.times[i - 1];
      EXPECT_LE(d, cfg.dt_max);
      if (i + 1 < plan.times.size()) {
        EXPECT_GE(d, cfg.dt_min);
      }
    }
    EXPECT_EQ(plan.times, oracle::scan_plan(frames, cfg.contrast_c, cfg.dt_min, cfg.dt_max,
                                            cfg.rate_floor));
  }
}

TEST(BuildPlan, UniformRampSpacingIsCOverRate) {
  // 0.3 log units per second: C / rate = 0.5 s
  std::vector<LogFrame> frames;
  for (int i = 0; i < 5; ++i) frames.push_back(make_log_frame(1, 1, i * 1000000u, {0.3 * i}));
  SamplerConfig cfg;
  const auto plan = build_plan(frames, cfg);
  for (std::size_t i = 1; i < plan.times.size(); ++i) {
    const auto d = static_cast<long long>(plan.times[i] - plan.times[i - 1]);
    EXPECT_LE(std::llabs(d - 500000), 1);
  }
}

TEST(BuildPlan, HalvingCNeverShortensPlan) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<LogFrame> frames;
    double v = 0.0;
    for (int i = 0; i < 6; ++i) {
      v += u(rng);
      frames.push_back(make_log_frame(1, 1, i * 33333u, {v}));
    }
    SamplerConfig a;
    a.contrast_c = 0.3;
    SamplerConfig b = a;
    b.contrast_c = 0.15;
    EXPECT_GE(build_plan(frames, b).times.size(), build_plan(frames, a).times.size());
  }
}

TEST(BuildPlan, RejectsSingleFrame) {
  EXPECT_THROW(build_plan(static_sequence(1), SamplerConfig{}), DomainError);
}

TEST(InterpolateLogFrame, LinearInTime) {
  std::vector<LogFrame> frames{make_log_frame(1, 1, 0, {0.0}), make_log_frame(1, 1, 1000, {1.0})};
  EXPECT_DOUBLE_EQ(interpolate_log_frame(frames, 250).log_l[0], 0.25);
  EXPECT_DOUBLE_EQ(interpolate_log_frame(frames, 1000).log_l[0], 1.0);
  EXPECT_THROW(interpolate_log_frame(frames, 1001), DomainError);
}

}  // namespace
}  // namespace evtforge
