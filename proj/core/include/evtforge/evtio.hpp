#pragma once

#include "evtforge/binary_io.hpp"
#include "evtforge/types.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evtforge {

// EVTS layout (little-endian, see FORMAT.md):
//   magic "EVTS" | u16 version | u16 width | u16 height | u64 event_count |
//   u64 t_offset | u32 flags, followed by event_count 13-byte records
//   u64 t | u16 x | u16 y | i8 p.
inline constexpr std::array<char, 4> kEvtsMagic = {'E', 'V', 'T', 'S'};
inline constexpr std::uint16_t kEvtsVersion = 1;
inline constexpr std::size_t kEvtsHeaderSize = 30;
inline constexpr std::size_t kEvtsRecordSize = 13;
inline constexpr std::uint32_t kFlagSorted = 1u << 0;
/// Records buffered before each write to disk.
inline constexpr std::size_t kWriterChunkEvents = std::size_t{1} << 20;

struct EvtFileHeader {
  std::array<char, 4> magic = kEvtsMagic;
  std::uint16_t version = kEvtsVersion;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint64_t event_count = 0;
  std::uint64_t t_offset = 0;
  std::uint32_t flags = kFlagSorted;

  bool sorted() const { return (flags & kFlagSorted) != 0; }
};

struct WriteOptions {
  /// When set, events must arrive in stream order and the sorted flag is
  /// recorded. Clear it to write arbitrary order without the flag.
  bool sorted = true;
};

/// Chunked writer. Output goes to a temporary file that is renamed onto the
/// target by finish(); an unfinished writer leaves no file behind.
class EventWriter {
 public:
  EventWriter(const std::filesystem::path& path, std::uint16_t width, std::uint16_t height,
              WriteOptions options = {});

  void append(std::span<const Event> events);
  /// Patches the event count into the header and publishes the file.
  /// Returns the total number of bytes written.
  std::uint64_t finish();

  std::uint64_t count() const { return count_; }

 private:
  void flush_buffer();

  AtomicFile file_;
  EvtFileHeader header_;
  std::vector<char> buffer_;
  std::uint64_t count_ = 0;
  std::optional<Event> last_;
  bool finished_ = false;
};

/// Writes the whole stream. Throws if `options.sorted` and the stream is
/// out of order, or if any event is out of bounds.
std::uint64_t write_stream(const EventStream& stream, const std::filesystem::path& path,
                           WriteOptions options = {});

/// Random-access reader over an EVTS file. Not shareable across threads
/// while reading; open one reader per thread.
class EventReader {
 public:
  explicit EventReader(const std::filesystem::path& path);

  const EvtFileHeader& header() const { return header_; }
  std::uint64_t size() const { return header_.event_count; }

  Event at(std::uint64_t index);
  Timestamp timestamp_at(std::uint64_t index);
  /// Records [begin, end).
  std::vector<Event> read(std::uint64_t begin, std::uint64_t end);
  /// Index range of events with t in [t0, t1), by binary search over the
  /// records. Requires the sorted flag.
  std::pair<std::uint64_t, std::uint64_t> find_window(Timestamp t0, Timestamp t1);

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  EvtFileHeader header_;
};

struct TimeWindow {
  Timestamp t0;
  Timestamp t1;  // exclusive
};

/// Full stream, or only events with t in [t0, t1).
EventStream read_stream(const std::filesystem::path& path,
                        std::optional<TimeWindow> window = std::nullopt);

EvtFileHeader read_header(const std::filesystem::path& path);

// --- dataset manifest -------------------------------------------------

/// Category tags: hiking, driving, flying, underwater, indoor, plus
/// "uncategorized" when none is given.
bool is_known_category(const std::string& tag);

struct ManifestEntry {
  std::string name;
  std::string file;
  std::uint64_t duration_us = 0;
  std::uint64_t event_count = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::string category;
  bool ok = true;
  std::string error;
};

struct Manifest {
  std::vector<ManifestEntry> sequences;  // sorted by name, then file

  std::uint64_t total_events() const;
  std::uint64_t total_duration_us() const;
  std::size_t failed() const;
};

/// `categories` is either empty or one tag per path. Unreadable files are
/// recorded as failed entries; the rest are aggregated normally.
Manifest build_manifest(std::span<const std::filesystem::path> paths,
                        std::span<const std::string> categories);

/// Deterministic INI-like text: one section per sequence, per-category
/// totals and an overall totals section, keys sorted within each section.
std::string format_manifest(const Manifest& manifest);

// --- depth maps -------------------------------------------------------

// EDPT layout: magic "EDPT" | u32 height | u32 width | height*width f32
// depth (row-major) | ceil(height*width / 8) bytes of validity, bit i of
// byte i/8 (LSB first) set when pixel i is valid.
void write_depth_map(const std::filesystem::path& path, const DepthMap& depth);
DepthMap read_depth_map(const std::filesystem::path& path);

}  // namespace evtforge
