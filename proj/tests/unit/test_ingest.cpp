#include "evtforge/error.hpp"
#include "evtforge/ingest.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

namespace evtforge {
namespace {
namespace fs = std::filesystem;

Frame flat(int w, int h, double v) {
  return Frame{w, h, std::vector<double>(static_cast<std::size_t>(w) * h, v), 0};
}

TEST(ToLog, MatchesNaturalLog) {
  Frame f{2, 1, {0.0, 1.0}, 42};
  const LogFrame l = to_log(f, 1e-3);
  EXPECT_NEAR(l.log_l[0], -6.907755278982137, 1e-12);
  EXPECT_NEAR(l.log_l[1], 0.0009995003330835331, 1e-15);
  EXPECT_EQ(l.t, 42u);
}

TEST(ToLog, EqualIntensityEqualLog) {
  const LogFrame l = to_log(Frame{2, 1, {0.37, 0.37}, 0});
  EXPECT_EQ(l.log_l[0], l.log_l[1]);
}

TEST(ToLog, RejectsNonPositiveEps) {
  EXPECT_THROW(to_log(flat(1, 1, 0.5), 0.0), DomainError);
  EXPECT_THROW(to_log(flat(1, 1, 0.5), -1.0), DomainError);
}

TEST(ToLog, MonotoneAndInvertible) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = u(rng), b = u(rng);
    const LogFrame l = to_log(Frame{2, 1, {a, b}, 0});
    if (a > b) {
      EXPECT_GT(l.log_l[0], l.log_l[1]);
    } else if (a < b) {
      EXPECT_LT(l.log_l[0], l.log_l[1]);
    }
    const Frame back = from_log(l);
    EXPECT_NEAR(back.intensity[0], a, 1e-12);
    EXPECT_NEAR(back.intensity[1], b, 1e-12);
  }
}

class SequenceDir : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = oracle::temp_dir("ingest"); }
  void TearDown() override { fs::remove_all(dir_); }

  void write_frames(int n, int w, int h, bool sixteen = false) {
    for (int i = 0; i < n; ++i) {
      Frame f = flat(w, h, i / 10.0);
      f.intensity[0] = 1.0;
      write_pgm(dir_ / ("f" + std::to_string(i) + ".pgm"), f, sixteen);
    }
  }
  fs::path dir_;
};

TEST_F(SequenceDir, UniformTimestampsFromFps) {
  write_frames(3, 4, 3);
  const auto frames = load_sequence(dir_, 30.0);
  ASSERT_EQ(frames.size(), 3u);
  EXPECT_EQ(frames[0].t, 0u);
  EXPECT_EQ(frames[1].t, 33333u);
  EXPECT_EQ(frames[2].t, 66666u);
}

TEST_F(SequenceDir, EightBitMaxIsOne) {
  write_frames(2, 4, 3);
  const auto frames = load_sequence(dir_, 30.0);
  EXPECT_DOUBLE_EQ(frames[0].intensity[0], 1.0);
  EXPECT_DOUBLE_EQ(frames[1].intensity[1], 26.0 / 255.0);  // round(0.1 * 255)
}

TEST_F(SequenceDir, SixteenBitNormalized) {
  write_frames(2, 4, 3, true);
  const auto frames = load_sequence(dir_, 30.0);
  EXPECT_DOUBLE_EQ(frames[0].intensity[0], 1.0);
  EXPECT_DOUBLE_EQ(frames[1].intensity[1], 6554.0 / 65535.0);
}

TEST_F(SequenceDir, SidecarTimestamps) {
  write_frames(3, 4, 3);
  std::ofstream(dir_ / kTimestampSidecar) << "10\n250\n900\n";
  const auto frames = load_sequence(dir_, 30.0);
  EXPECT_EQ(frames[1].t, 250u);
  EXPECT_EQ(frames[2].t, 900u);
}

TEST_F(SequenceDir, NonMonotoneSidecarFails) {
  write_frames(3, 4, 3);
  std::ofstream(dir_ / kTimestampSidecar) << "0\n100\n50\n";
  try {
    load_sequence(dir_, 30.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("non-monotone timestamps"), std::string::npos);
  }
}

TEST_F(SequenceDir, MismatchedResolutionFails) {
  write_frames(2, 4, 3);
  write_pgm(dir_ / "f9.pgm", flat(5, 3, 0.5));
  EXPECT_THROW(load_sequence(dir_, 30.0), DomainError);
}

TEST_F(SequenceDir, UnreadableFrameNamesFile) {
  write_frames(2, 4, 3);
  std::ofstream(dir_ / "broken.pgm") << "not an image";
  try {
    load_sequence(dir_, 30.0);
    FAIL() << "expected an error";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.pgm"), std::string::npos);
  }
}

TEST_F(SequenceDir, OrderIndependentOfThreads) {
  write_frames(7, 5, 4);
  const auto a = load_sequence(dir_, 30.0, 1);
  const auto b = load_sequence(dir_, 30.0, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].intensity, b[i].intensity);
    EXPECT_EQ(a[i].t, b[i].t);
  }
}

TEST(LoadSequence, MissingDirectory) {
  try {
    load_sequence("/definitely/not/here", 30.0);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("cannot read frames"), std::string::npos);
  }
}

}  // namespace
}  // namespace evtforge
