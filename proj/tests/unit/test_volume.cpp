#include "evtforge/error.hpp"
#include "evtforge/volume.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace evtforge {
namespace {

EventStream single(Timestamp t, Polarity p = Polarity::Positive) {
  EventStream s;
  s.width = 3;
  s.height = 2;
  s.events = {{1, 1, t, p}};
  return s;
}

TEST(BuildVolume, KernelPeak) {
  // t* = 4 * t / 400 = 2
  const auto v = build_volume(single(200), 0, 400, 5);
  for (int b = 0; b < 5; ++b) EXPECT_EQ(v.at(b, 1, 1), b == 2 ? 1.0 : 0.0);
}

TEST(BuildVolume, HalfwayBetweenBins) {
  const auto v = build_volume(single(150), 0, 400, 5);
  EXPECT_DOUBLE_EQ(v.at(1, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(v.at(2, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(v.sum(), 1.0);
}

TEST(BuildVolume, OppositePolaritiesCancel) {
  EventStream s = single(150, Polarity::Negative);
  s.events.push_back({1, 1, 150, Polarity::Positive});
  const auto v = build_volume(s, 0, 400, 5);
  for (double x : v.data) EXPECT_EQ(x, 0.0);
}

TEST(BuildVolume, WindowEdgesInclusive) {
  EventStream s = single(0);
  s.events.push_back({0, 0, 400, Polarity::Positive});
  s.events.push_back({0, 0, 401, Polarity::Positive});
  const auto v = build_volume(s, 0, 400, 5);
  EXPECT_EQ(v.at(0, 1, 1), 1.0);
  EXPECT_EQ(v.at(4, 0, 0), 1.0);
  EXPECT_EQ(v.sum(), 2.0);
}

TEST(BuildVolume, RejectsBadArguments) {
  EXPECT_THROW(build_volume(single(0), 0, 400, 1), DomainError);
  EXPECT_THROW(build_volume(single(0), 400, 400, 5), DomainError);
}

TEST(BuildVolume, SignedMassConserved) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<Timestamp> start(0, 500000);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = oracle::random_stream(rng, 2000, 16, 12, 1000000);
    const Timestamp t0 = start(rng);
    const Timestamp t1 = t0 + 166666;
    const auto v = build_volume(s, t0, t1, 5);
    double mass = 0.0;
    for (const Event& e : s.events) {
      if (e.t >= t0 && e.t <= t1) mass += sign(e.p);
    }
    EXPECT_NEAR(v.sum(), mass, 1e-6);
  }
}

TEST(BuildVolume, EachEventMatchesDirectKernel) {
  std::mt19937_64 rng(14);
  const auto s = oracle::random_stream(rng, 300, 4, 4, 10000);
  const auto v = build_volume(s, 1000, 9000, 7);
  std::vector<double> ref(v.data.size(), 0.0);
  for (const Event& e : s.events) {
    if (e.t < 1000 || e.t > 9000) continue;
    const double ts = 6.0 * static_cast<double>(e.t - 1000) / 8000.0;
    for (int b = 0; b < 7; ++b) {
      ref[v.index(b, e.y, e.x)] += sign(e.p) * std::max(0.0, 1.0 - std::abs(b - ts));
    }
  }
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(v.data[i], ref[i], 1e-12);
}

TEST(BuildVolume, IndependentOfThreadCount) {
  std::mt19937_64 rng(15);
  const auto s = oracle::random_stream(rng, 200000, 64, 48, 166666);
  VolumeOptions one, four;
  four.threads = 4;
  EXPECT_EQ(build_volume(s, 0, 166666, 5, one).data, build_volume(s, 0, 166666, 5, four).data);
}

TEST(DefaultWindow, Examples) {
  EXPECT_EQ(default_window(30.0, 5), 166666u);
  EXPECT_EQ(default_window(30.0, 1), 33333u);
  EXPECT_EQ(default_window(60.0, 5), 83333u);
}

TEST(VolumeFile, RoundTripThroughFloat) {
  const auto dir = oracle::temp_dir("vol");
  const auto v = build_volume(single(150), 0, 400, 5);
  write_volume(dir / "v.evol", v);
  const auto back = read_volume(dir / "v.evol");
  EXPECT_EQ(back.bins, 5);
  EXPECT_EQ(back.t_end, 400u);
  EXPECT_EQ(back.data, v.data);  // 0.5 and 0 are exact in float
  EXPECT_EQ(std::filesystem::file_size(dir / "v.evol"), 28u + 5 * 3 * 2 * 4);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace evtforge
