#include "evtforge/evtio.hpp"

#include "evtforge/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace evtforge {
namespace fs = std::filesystem;

namespace {

void encode_header(std::vector<char>& buf, const EvtFileHeader& h) {
  buf.insert(buf.end(), h.magic.begin(), h.magic.end());
  le::put(buf, h.version);
  le::put(buf, h.width);
  le::put(buf, h.height);
  le::put(buf, h.event_count);
  le::put(buf, h.t_offset);
  le::put(buf, h.flags);
}

EvtFileHeader decode_header(const char* p, const fs::path& path) {
  EvtFileHeader h;
  std::copy_n(p, 4, h.magic.begin());
  if (h.magic != kEvtsMagic) throw IoError(path.string() + ": bad magic, not an EVTS file");
  h.version = le::get<std::uint16_t>(p + 4);
  if (h.version != kEvtsVersion) {
    throw IoError(path.string() + ": unsupported EVTS version " + std::to_string(h.version));
  }
  h.width = le::get<std::uint16_t>(p + 6);
  h.height = le::get<std::uint16_t>(p + 8);
  h.event_count = le::get<std::uint64_t>(p + 10);
  h.t_offset = le::get<std::uint64_t>(p + 18);
  h.flags = le::get<std::uint32_t>(p + 26);
  return h;
}

inline void encode_record(char* p, const Event& e, Timestamp t_offset) {
  const std::uint64_t t = e.t - t_offset;
  for (int i = 0; i < 8; ++i) p[i] = static_cast<char>((t >> (8 * i)) & 0xffu);
  p[8] = static_cast<char>(e.x & 0xffu);
  p[9] = static_cast<char>(e.x >> 8);
  p[10] = static_cast<char>(e.y & 0xffu);
  p[11] = static_cast<char>(e.y >> 8);
  p[12] = static_cast<char>(sign(e.p));
}

inline Event decode_record(const char* p, Timestamp t_offset) {
  Event e;
  e.t = le::get<std::uint64_t>(p) + t_offset;
  e.x = le::get<std::uint16_t>(p + 8);
  e.y = le::get<std::uint16_t>(p + 10);
  const auto raw = static_cast<std::int8_t>(p[12]);
  if (raw != 1 && raw != -1) throw IoError("corrupt polarity byte " + std::to_string(raw));
  e.p = static_cast<Polarity>(raw);
  return e;
}

}  // namespace

// --- writer -----------------------------------------------------------

EventWriter::EventWriter(const fs::path& path, std::uint16_t width, std::uint16_t height,
                         WriteOptions options)
    : file_(path) {
  header_.width = width;
  header_.height = height;
  header_.flags = options.sorted ? kFlagSorted : 0u;
  std::vector<char> head;
  encode_header(head, header_);
  file_.write(head);
  buffer_.reserve(kWriterChunkEvents * kEvtsRecordSize);
}

void EventWriter::append(std::span<const Event> events) {
  if (finished_) throw DomainError("append after finish");
  for (const Event& e : events) {
    if (e.x >= header_.width || e.y >= header_.height) {
      throw DomainError("event " + std::to_string(count_) + " at (" + std::to_string(e.x) + ", " +
                        std::to_string(e.y) + ") is outside the sensor");
    }
    if (header_.sorted() && last_ && event_less(e, *last_)) {
      throw DomainError("unsorted stream: event " + std::to_string(count_) +
                        " precedes its predecessor; clear the sorted flag to write it anyway");
    }
    last_ = e;
    const std::size_t at = buffer_.size();
    buffer_.resize(at + kEvtsRecordSize);
    encode_record(buffer_.data() + at, e, header_.t_offset);
    ++count_;
    if (buffer_.size() >= kWriterChunkEvents * kEvtsRecordSize) flush_buffer();
  }
}

void EventWriter::flush_buffer() {
  file_.write(buffer_);
  buffer_.clear();
}

std::uint64_t EventWriter::finish() {
  if (finished_) throw DomainError("writer already finished");
  flush_buffer();
  header_.event_count = count_;
  std::vector<char> head;
  encode_header(head, header_);
  auto& out = file_.stream();
  out.seekp(0);
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  if (!out) throw IoError("cannot patch header of " + file_.target().string());
  file_.commit();
  finished_ = true;
  return kEvtsHeaderSize + count_ * kEvtsRecordSize;
}

std::uint64_t write_stream(const EventStream& stream, const fs::path& path, WriteOptions options) {
  EventWriter writer(path, stream.width, stream.height, options);
  writer.append(stream.events);
  return writer.finish();
}

// --- reader -----------------------------------------------------------

EventReader::EventReader(const fs::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot read " + path.string());
  char head[kEvtsHeaderSize];
  in_.read(head, kEvtsHeaderSize);
  if (in_.gcount() != static_cast<std::streamsize>(kEvtsHeaderSize)) {
    throw IoError(path.string() + ": truncated header");
  }
  header_ = decode_header(head, path);
  in_.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in_.tellg());
  const std::uint64_t present = (bytes - kEvtsHeaderSize) / kEvtsRecordSize;
  if (bytes != kEvtsHeaderSize + header_.event_count * kEvtsRecordSize) {
    throw IoError(path.string() + ": truncated or padded file, expected " +
                  std::to_string(header_.event_count) + " events, found " +
                  std::to_string(present));
  }
}

std::vector<Event> EventReader::read(std::uint64_t begin, std::uint64_t end) {
  if (begin > end || end > size()) throw DomainError("record range out of bounds");
  std::vector<Event> out;
  out.reserve(end - begin);
  constexpr std::uint64_t kChunk = 1 << 16;
  std::vector<char> buf;
  in_.clear();
  in_.seekg(static_cast<std::streamoff>(kEvtsHeaderSize + begin * kEvtsRecordSize));
  for (std::uint64_t i = begin; i < end; i += kChunk) {
    const std::uint64_t n = std::min(kChunk, end - i);
    buf.resize(n * kEvtsRecordSize);
    in_.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!in_) throw IoError(path_.string() + ": short read");
    for (std::uint64_t j = 0; j < n; ++j) {
      out.push_back(decode_record(buf.data() + j * kEvtsRecordSize, header_.t_offset));
    }
  }
  return out;
}

Event EventReader::at(std::uint64_t index) {
  if (index >= size()) throw DomainError("record index out of bounds");
  char rec[kEvtsRecordSize];
  in_.clear();
  in_.seekg(static_cast<std::streamoff>(kEvtsHeaderSize + index * kEvtsRecordSize));
  in_.read(rec, kEvtsRecordSize);
  if (!in_) throw IoError(path_.string() + ": short read");
  return decode_record(rec, header_.t_offset);
}

Timestamp EventReader::timestamp_at(std::uint64_t index) { return at(index).t; }

std::pair<std::uint64_t, std::uint64_t> EventReader::find_window(Timestamp t0, Timestamp t1) {
  if (!header_.sorted()) throw DomainError(path_.string() + ": windowed search needs a sorted file");
  auto first_not_before = [&](Timestamp t) {
    std::uint64_t lo = 0, hi = size();
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (timestamp_at(mid) < t) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  };
  const std::uint64_t begin = first_not_before(t0);
  const std::uint64_t end = t1 > t0 ? std::max(begin, first_not_before(t1)) : begin;
  return {begin, end};
}

EventStream read_stream(const fs::path& path, std::optional<TimeWindow> window) {
  EventReader reader(path);
  EventStream stream;
  stream.width = reader.header().width;
  stream.height = reader.header().height;
  stream.source_id = path.filename().string();
  if (!window) {
    stream.events = reader.read(0, reader.size());
  } else if (reader.header().sorted()) {
    const auto [begin, end] = reader.find_window(window->t0, window->t1);
    stream.events = reader.read(begin, end);
  } else {
    for (const Event& e : reader.read(0, reader.size())) {
      if (e.t >= window->t0 && e.t < window->t1) stream.events.push_back(e);
    }
  }
  return stream;
}

EvtFileHeader read_header(const fs::path& path) { return EventReader(path).header(); }

// --- manifest ---------------------------------------------------------

bool is_known_category(const std::string& tag) {
  static const char* const kTags[] = {"hiking", "driving", "flying", "underwater", "indoor",
                                      "uncategorized"};
  return std::any_of(std::begin(kTags), std::end(kTags), [&](const char* t) { return tag == t; });
}

std::uint64_t Manifest::total_events() const {
  std::uint64_t n = 0;
  for (const auto& s : sequences) n += s.ok ? s.event_count : 0;
  return n;
}

std::uint64_t Manifest::total_duration_us() const {
  std::uint64_t n = 0;
  for (const auto& s : sequences) n += s.ok ? s.duration_us : 0;
  return n;
}

std::size_t Manifest::failed() const {
  return static_cast<std::size_t>(
      std::count_if(sequences.begin(), sequences.end(), [](const auto& s) { return !s.ok; }));
}

Manifest build_manifest(std::span<const fs::path> paths, std::span<const std::string> categories) {
  if (!categories.empty() && categories.size() != paths.size()) {
    throw DomainError("expected one category per file");
  }
  for (const auto& c : categories) {
    if (!is_known_category(c)) throw DomainError("unknown category '" + c + "'");
  }
  Manifest m;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    ManifestEntry entry;
    entry.name = paths[i].stem().string();
    entry.file = paths[i].string();
    entry.category = categories.empty() ? "uncategorized" : categories[i];
    try {
      EventReader reader(paths[i]);
      entry.event_count = reader.size();
      entry.width = reader.header().width;
      entry.height = reader.header().height;
      if (reader.size() > 0) {
        Timestamp lo, hi;
        if (reader.header().sorted()) {
          lo = reader.timestamp_at(0);
          hi = reader.timestamp_at(reader.size() - 1);
        } else {
          const auto events = reader.read(0, reader.size());
          const auto [mn, mx] = std::minmax_element(
              events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
          lo = mn->t;
          hi = mx->t;
        }
        entry.duration_us = hi - lo;
      }
    } catch (const Error& e) {
      entry.ok = false;
      entry.error = e.what();
      entry.event_count = 0;
      entry.duration_us = 0;
    }
    m.sequences.push_back(std::move(entry));
  }
  std::sort(m.sequences.begin(), m.sequences.end(), [](const auto& a, const auto& b) {
    return a.name != b.name ? a.name < b.name : a.file < b.file;
  });
  return m;
}

std::string format_manifest(const Manifest& m) {
  std::ostringstream out;
  for (const auto& s : m.sequences) {
    out << "[sequence." << s.name << "]\n";
    out << "category = " << s.category << "\n";
    out << "duration_us = " << s.duration_us << "\n";
    if (!s.ok) out << "error = " << s.error << "\n";
    out << "event_count = " << s.event_count << "\n";
    out << "file = " << s.file << "\n";
    out << "height = " << s.height << "\n";
    out << "status = " << (s.ok ? "ok" : "failed") << "\n";
    out << "width = " << s.width << "\n\n";
  }
  struct Totals {
    std::uint64_t sequences = 0, events = 0, duration = 0;
  };
  std::map<std::string, Totals> per_category;
  for (const auto& s : m.sequences) {
    if (!s.ok) continue;
    auto& t = per_category[s.category];
    ++t.sequences;
    t.events += s.event_count;
    t.duration += s.duration_us;
  }
  for (const auto& [tag, t] : per_category) {
    out << "[category." << tag << "]\n";
    out << "duration_us = " << t.duration << "\n";
    out << "event_count = " << t.events << "\n";
    out << "sequences = " << t.sequences << "\n\n";
  }
  out << "[totals]\n";
  out << "duration_us = " << m.total_duration_us() << "\n";
  out << "event_count = " << m.total_events() << "\n";
  out << "failed = " << m.failed() << "\n";
  out << "sequences = " << m.sequences.size() << "\n";
  return out.str();
}

// --- depth maps -------------------------------------------------------

void write_depth_map(const fs::path& path, const DepthMap& depth) {
  std::vector<char> buf;
  const std::size_t n = depth.pixel_count();
  buf.reserve(12 + 4 * n + (n + 7) / 8);
  buf.insert(buf.end(), {'E', 'D', 'P', 'T'});
  le::put(buf, static_cast<std::uint32_t>(depth.height()));
  le::put(buf, static_cast<std::uint32_t>(depth.width()));
  for (std::size_t i = 0; i < n; ++i) {
    le::put_f32(buf, depth.valid_at(i) ? static_cast<float>(depth.depth_at(i)) : 0.0f);
  }
  std::vector<char> mask((n + 7) / 8, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (depth.valid_at(i)) mask[i / 8] = static_cast<char>(mask[i / 8] | (1 << (i % 8)));
  }
  buf.insert(buf.end(), mask.begin(), mask.end());
  AtomicFile out(path);
  out.write(buf);
  out.commit();
}

DepthMap read_depth_map(const fs::path& path) {
  const std::vector<char> bytes = read_file(path);
  if (bytes.size() < 12 || !std::equal(bytes.begin(), bytes.begin() + 4, "EDPT")) {
    throw IoError(path.string() + ": not an EDPT depth file");
  }
  const auto height = le::get<std::uint32_t>(bytes.data() + 4);
  const auto width = le::get<std::uint32_t>(bytes.data() + 8);
  if (height > 65535 || width > 65535) throw IoError(path.string() + ": implausible depth map size");
  const std::size_t n = static_cast<std::size_t>(height) * width;
  if (bytes.size() != 12 + 4 * n + (n + 7) / 8) {
    throw IoError(path.string() + ": depth file size does not match its header");
  }
  std::vector<double> depth(n);
  std::vector<std::uint8_t> valid(n);
  const char* mask = bytes.data() + 12 + 4 * n;
  for (std::size_t i = 0; i < n; ++i) {
    depth[i] = le::get_f32(bytes.data() + 12 + 4 * i);
    valid[i] = (static_cast<unsigned char>(mask[i / 8]) >> (i % 8)) & 1u;
  }
  try {
    return DepthMap(static_cast<int>(width), static_cast<int>(height), std::move(depth),
                    std::move(valid));
  } catch (const DomainError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace evtforge
