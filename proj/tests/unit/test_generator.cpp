#include "evtforge/error.hpp"
#include "evtforge/generator.hpp"
#include "evtforge/sampler.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace evtforge {
namespace {

using oracle::make_log_frame;

std::vector<LogFrame> single_pixel(std::vector<double> levels, Timestamp dt = 1000) {
  std::vector<LogFrame> frames;
  for (std::size_t i = 0; i < levels.size(); ++i) frames.push_back(make_log_frame(1, 1, i * dt, {levels[i]}));
  return frames;
}

TEST(Generate, ConstantSequenceIsSilent) {
  std::vector<LogFrame> frames(4, make_log_frame(3, 2, 0, std::vector<double>(6, 0.3)));
  for (std::size_t i = 0; i < frames.size(); ++i) frames[i].t = i * 100;
  EXPECT_TRUE(generate(frames, 0.15, 3, 2).empty());
}

TEST(Generate, TwoCrossingsLeaveResidual) {
  const auto frames = single_pixel({0.0, 0.45});
  EventGenerator gen(frames[0], 0.2);
  std::vector<Event> out;
  EXPECT_EQ(gen.step(frames[1], out), 2u);
  EXPECT_EQ(out[0].p, Polarity::Positive);
  EXPECT_EQ(out[1].p, Polarity::Positive);
  EXPECT_NEAR(gen.state().ref_log[0], 0.4, 1e-12);
  EXPECT_EQ(oracle::ladder_frames(frames, 0.2).at({0, 0}).size(), 2u);
}

TEST(Generate, DownThenBackMatchesLadder) {
  const auto frames = single_pixel({0.0, -0.25, 0.0});
  const auto s = generate(frames, 0.2, 1, 1);
  const auto ref = oracle::ladder_frames(frames, 0.2).at({0, 0});
  // ref goes 0 -> -0.2 on the way down, then -0.2 -> 0.0 on the way back
  ASSERT_EQ(ref.size(), 2u);
  EXPECT_EQ(ref[0].p, -1);
  EXPECT_EQ(ref[1].p, +1);
  ASSERT_EQ(s.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_EQ(sign(s.events[i].p), ref[i].p);
    EXPECT_EQ(s.events[i].t, ref[i].t);
  }
}

TEST(Generate, CrossingTimestampsInterpolated) {
  const auto s = generate(single_pixel({0.0, 0.4}), 0.1, 1, 1);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.events[0].t, 250u);
  EXPECT_EQ(s.events[3].t, 1000u);
}

TEST(Generate, RejectsBadInput) {
  const auto frames = single_pixel({0.0, 0.1});
  EXPECT_THROW(generate(frames, 0.0, 1, 1), DomainError);
  EXPECT_THROW(generate(frames, 0.1, 2, 1), DomainError);
  auto backwards = frames;
  backwards[1].t = 0;
  EXPECT_THROW(generate(backwards, 0.1, 1, 1), DomainError);
}

std::vector<LogFrame> random_frames(std::mt19937_64& rng, int w, int h, int n) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_int_distribution<Timestamp> gap(1, 40000);
  std::vector<LogFrame> frames;
  Timestamp t = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(static_cast<std::size_t>(w) * h);
    for (auto& x : v) x = u(rng);
    frames.push_back(make_log_frame(w, h, t, v));
    t += gap(rng);
  }
  return frames;
}

TEST(Generate, MatchesLadderOracleOnRandomInputs) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> side(1, 8), count(2, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = side(rng), h = side(rng);
    const auto frames = random_frames(rng, w, h, count(rng));
    const auto stream = generate(frames, 0.15, w, h);
    EXPECT_TRUE(validate_stream(stream).empty());
    const auto got = oracle::by_pixel(stream);
    const auto want = oracle::ladder_frames(frames, 0.15);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [px, evs] : want) {
      const auto& g = got.at(px);
      ASSERT_EQ(g.size(), evs.size());
      for (std::size_t i = 0; i < evs.size(); ++i) {
        EXPECT_EQ(g[i].p, evs[i].p);
        EXPECT_LE(g[i].t > evs[i].t ? g[i].t - evs[i].t : evs[i].t - g[i].t, 1u);
      }
    }
  }
}

TEST(Generate, ReconstructionWithinOneThreshold) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto frames = random_frames(rng, 6, 5, 8);
    const double c = 0.1;
    const auto stream = generate(frames, c, 6, 5);
    std::vector<double> rec = frames.front().log_l;
    for (const Event& e : stream.events) rec[static_cast<std::size_t>(e.y) * 6 + e.x] += c * sign(e.p);
    for (std::size_t i = 0; i < rec.size(); ++i) EXPECT_LT(std::abs(rec[i] - frames.back().log_l[i]), c);
  }
}

TEST(Generate, DoublingCNeverAddsEvents) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto frames = random_frames(rng, 5, 5, 6);
    EXPECT_LE(generate(frames, 0.2, 5, 5).size(), generate(frames, 0.1, 5, 5).size());
  }
}

TEST(Generate, IndependentOfThreadCount) {
  std::mt19937_64 rng(10);
  const auto frames = random_frames(rng, 40, 70, 6);
  const auto a = generate(frames, 0.1, 40, 70, 1);
  const auto b = generate(frames, 0.1, 40, 70, 4);
  EXPECT_EQ(a.events, b.events);
  EXPECT_TRUE(validate_stream(a).empty());
}

TEST(EventRateStats, EmptyStream) { EXPECT_TRUE(event_rate_stats(EventStream{}, 1000).empty()); }

TEST(EventRateStats, OneWindow) {
  EventStream s;
  s.width = s.height = 4;
  for (Timestamp t = 0; t < 4; ++t) s.events.push_back({0, 0, t, Polarity::Positive});
  const auto rows = event_rate_stats(s, 1000);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].total, 4u);
}

TEST(EventRateStats, AlternatingPolarityBalance) {
  EventStream s;
  s.width = s.height = 4;
  for (Timestamp t = 0; t < 400; ++t) {
    s.events.push_back({0, 0, t, t % 2 ? Polarity::Negative : Polarity::Positive});
  }
  const auto rows = event_rate_stats(s, 100);
  ASSERT_EQ(rows.size(), 4u);
  std::uint64_t sum = 0;
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.balance, 0.5);
    sum += r.total;
  }
  EXPECT_EQ(sum, s.size());
}

TEST(EventRateStats, GapsProduceEmptyRows) {
  EventStream s;
  s.width = s.height = 1;
  s.events = {{0, 0, 10, Polarity::Positive}, {0, 0, 350, Polarity::Negative}};
  const auto rows = event_rate_stats(s, 100);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].total, 0u);
  EXPECT_EQ(rows[3].t_begin, 310u);
  EXPECT_THROW(event_rate_stats(s, 0), DomainError);
}

}  // namespace
}  // namespace evtforge
