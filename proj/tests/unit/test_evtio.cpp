#include "evtforge/error.hpp"
#include "evtforge/evtio.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

namespace evtforge {
namespace {
namespace fs = std::filesystem;

class EvtFiles : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = oracle::temp_dir("evtio"); }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

std::vector<unsigned char> bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST_F(EvtFiles, ExactByteLayout) {
  EventStream s;
  s.width = 640;
  s.height = 480;
  s.events = {{0x0102, 0x0103, 0x0A0B0C0D0E0F1011ull, Polarity::Negative}};
  write_stream(s, dir_ / "one.evts");
  const auto b = bytes_of(dir_ / "one.evts");
  const std::vector<unsigned char> want{
      'E', 'V', 'T', 'S', 1, 0, 0x80, 0x02, 0xE0, 0x01,  // magic, version, 640, 480
      1, 0, 0, 0, 0, 0, 0, 0,                            // count
      0, 0, 0, 0, 0, 0, 0, 0,                            // t_offset
      1, 0, 0, 0,                                        // flags
      0x11, 0x10, 0x0F, 0x0E, 0x0D, 0x0C, 0x0B, 0x0A,    // t
      0x02, 0x01, 0x03, 0x01, 0xFF};
  EXPECT_EQ(b, want);
}

TEST_F(EvtFiles, EmptyStreamRoundTrip) {
  EventStream s;
  s.width = 4;
  s.height = 4;
  write_stream(s, dir_ / "e.evts");
  EXPECT_EQ(fs::file_size(dir_ / "e.evts"), kEvtsHeaderSize);
  const auto back = read_stream(dir_ / "e.evts");
  EXPECT_TRUE(back.empty());
  EXPECT_EQ(back.width, 4);
}

TEST_F(EvtFiles, RandomRoundTripAndWindows) {
  std::mt19937_64 rng(21);
  const auto s = oracle::random_stream(rng, 50000, 320, 240, 2000000);
  write_stream(s, dir_ / "r.evts");
  const auto back = read_stream(dir_ / "r.evts");
  EXPECT_EQ(back.events, s.events);
  std::uniform_int_distribution<Timestamp> ut(0, 2100000);
  for (int i = 0; i < 50; ++i) {
    Timestamp a = ut(rng), b = ut(rng);
    if (a > b) std::swap(a, b);
    const auto w = read_stream(dir_ / "r.evts", TimeWindow{a, b});
    std::vector<Event> want;
    for (const Event& e : s.events) {
      if (e.t >= a && e.t < b) want.push_back(e);
    }
    EXPECT_EQ(w.events, want);
  }
}

TEST_F(EvtFiles, WriterSpansChunks) {
  std::mt19937_64 rng(22);
  const auto s = oracle::random_stream(rng, kWriterChunkEvents + 1234, 32, 32, 10000000);
  EventWriter w(dir_ / "c.evts", 32, 32);
  w.append(std::span(s.events).first(700000));
  w.append(std::span(s.events).subspan(700000));
  EXPECT_EQ(w.finish(), kEvtsHeaderSize + s.size() * kEvtsRecordSize);
  EXPECT_EQ(read_stream(dir_ / "c.evts").events, s.events);
}

TEST_F(EvtFiles, UnfinishedWriterLeavesNothing) {
  {
    EventWriter w(dir_ / "x.evts", 4, 4);
    const std::vector<Event> ev{{0, 0, 1, Polarity::Positive}};
    w.append(ev);
  }
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(EvtFiles, WriterRejectsDisorderAndBounds) {
  EventWriter w(dir_ / "x.evts", 4, 4);
  const std::vector<Event> bad_order{{0, 0, 5, Polarity::Positive}, {0, 0, 3, Polarity::Positive}};
  EXPECT_THROW(w.append(bad_order), DomainError);
  EventWriter w2(dir_ / "y.evts", 4, 4);
  const std::vector<Event> oob{{4, 0, 5, Polarity::Positive}};
  EXPECT_THROW(w2.append(oob), DomainError);
}

TEST_F(EvtFiles, UnsortedWriteClearsFlag) {
  EventStream s;
  s.width = s.height = 4;
  s.events = {{0, 0, 5, Polarity::Positive}, {0, 0, 3, Polarity::Positive}};
  EXPECT_THROW(write_stream(s, dir_ / "u.evts"), DomainError);
  write_stream(s, dir_ / "u.evts", WriteOptions{false});
  EXPECT_FALSE(read_header(dir_ / "u.evts").sorted());
  EXPECT_EQ(read_stream(dir_ / "u.evts").events, s.events);
  const auto w = read_stream(dir_ / "u.evts", TimeWindow{0, 4});
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w.events[0].t, 3u);
  EventReader reader(dir_ / "u.evts");
  EXPECT_THROW(reader.find_window(0, 4), DomainError);
}

TEST_F(EvtFiles, TruncatedFileReportsCounts) {
  std::mt19937_64 rng(23);
  write_stream(oracle::random_stream(rng, 10, 4, 4, 100), dir_ / "t.evts");
  fs::resize_file(dir_ / "t.evts", kEvtsHeaderSize + 7 * kEvtsRecordSize + 5);
  try {
    read_stream(dir_ / "t.evts");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("expected 10 events, found 7"), std::string::npos);
  }
}

TEST_F(EvtFiles, BadMagicAndVersion) {
  std::ofstream(dir_ / "m.evts", std::ios::binary) << std::string(30, 'x');
  EXPECT_THROW(read_stream(dir_ / "m.evts"), IoError);
  EventStream s;
  s.width = s.height = 1;
  write_stream(s, dir_ / "v.evts");
  {
    std::fstream f(dir_ / "v.evts", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    f.put(2);
  }
  EXPECT_THROW(read_stream(dir_ / "v.evts"), IoError);
  EXPECT_THROW(read_stream(dir_ / "missing.evts"), IoError);
}

TEST_F(EvtFiles, CorruptPolarityByte) {
  EventStream s;
  s.width = s.height = 1;
  s.events = {{0, 0, 1, Polarity::Positive}};
  write_stream(s, dir_ / "p.evts");
  {
    std::fstream f(dir_ / "p.evts", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(kEvtsHeaderSize + 12);
    f.put(0);
  }
  EXPECT_THROW(read_stream(dir_ / "p.evts"), IoError);
}

TEST_F(EvtFiles, ManifestAggregates) {
  EventStream a;
  a.width = a.height = 8;
  a.events = {{0, 0, 100, Polarity::Positive}, {1, 1, 600, Polarity::Negative}};
  EventStream b = a;
  b.events.push_back({2, 2, 1100, Polarity::Positive});
  write_stream(a, dir_ / "alpha.evts");
  write_stream(b, dir_ / "beta.evts");
  std::ofstream(dir_ / "junk.evts") << "junk";
  const std::vector<fs::path> paths{dir_ / "beta.evts", dir_ / "junk.evts", dir_ / "alpha.evts"};
  const std::vector<std::string> cats{"hiking", "driving", "hiking"};
  const auto m = build_manifest(paths, cats);
  ASSERT_EQ(m.sequences.size(), 3u);
  EXPECT_EQ(m.sequences[0].name, "alpha");
  EXPECT_EQ(m.failed(), 1u);
  EXPECT_EQ(m.total_events(), 5u);
  EXPECT_EQ(m.total_duration_us(), 500u + 1000u);
  const auto text = format_manifest(m);
  EXPECT_NE(text.find("[category.hiking]"), std::string::npos);
  EXPECT_NE(text.find("[totals]"), std::string::npos);
  EXPECT_EQ(text, format_manifest(build_manifest(paths, cats)));
  const std::vector<std::string> bad{"space", "driving", "hiking"};
  EXPECT_THROW(build_manifest(paths, bad), DomainError);
}

TEST_F(EvtFiles, DepthMapRoundTrip) {
  DepthMap d(5, 3);
  d.set(0, 0, 1.5);
  d.set(4, 2, 0.25);
  d.set(2, 1, 3.0);
  write_depth_map(dir_ / "d.edpt", d);
  const auto back = read_depth_map(dir_ / "d.edpt");
  EXPECT_EQ(back.valid_count(), 3u);
  EXPECT_EQ(back.depth(4, 2), 0.25);
  EXPECT_FALSE(back.valid(1, 0));
  EXPECT_EQ(fs::file_size(dir_ / "d.edpt"), 4u + 8u + 15u * 4u + 2u);
}

}  // namespace
}  // namespace evtforge
