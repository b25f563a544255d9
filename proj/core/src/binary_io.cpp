#include "evtforge/binary_io.hpp"

#include "evtforge/error.hpp"

#include <atomic>
#include <system_error>
#include <unistd.h>

namespace evtforge {
namespace fs = std::filesystem;

namespace {

fs::path temp_name(const fs::path& target) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1));
  return tmp;
}

}  // namespace

AtomicFile::AtomicFile(fs::path target) : target_(std::move(target)), temp_(temp_name(target_)) {
  out_.open(temp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open " + target_.string() + " for writing");
}

AtomicFile::~AtomicFile() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    fs::remove(temp_, ec);
  }
}

void AtomicFile::write(std::span<const char> bytes) {
  out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out_) throw IoError("write failed for " + target_.string());
}

void AtomicFile::commit() {
  out_.flush();
  if (!out_) throw IoError("write failed for " + target_.string());
  out_.close();
  std::error_code ec;
  fs::rename(temp_, target_, ec);
  if (ec) throw IoError("cannot move output into place at " + target_.string() + ": " + ec.message());
  committed_ = true;
}

std::vector<char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot read " + path.string());
  const auto size = static_cast<std::size_t>(in.tellg());
  std::vector<char> bytes(size);
  in.seekg(0);
  in.read(bytes.data(), static_cast<std::streamsize>(size));
  if (!in) throw IoError("short read on " + path.string());
  return bytes;
}

void write_grid(const fs::path& path, const GridHeader& header, std::span<const double> values) {
  const std::size_t expected =
      static_cast<std::size_t>(header.bins) * header.height * header.width;
  if (values.size() != expected) throw DomainError("grid size does not match its header");

  std::vector<char> buf;
  buf.reserve(kGridHeaderSize + 4 * values.size());
  buf.insert(buf.end(), header.magic.begin(), header.magic.end());
  le::put(buf, header.version);
  le::put(buf, header.bins);
  le::put(buf, header.height);
  le::put(buf, header.width);
  le::put(buf, header.t_start);
  le::put(buf, header.t_end);
  for (double v : values) le::put_f32(buf, static_cast<float>(v));

  AtomicFile out(path);
  out.write(buf);
  out.commit();
}

GridFile read_grid(const fs::path& path, const std::array<char, 4>& expected_magic) {
  const std::vector<char> bytes = read_file(path);
  if (bytes.size() < kGridHeaderSize) throw IoError(path.string() + ": truncated grid header");
  GridFile grid;
  std::copy_n(bytes.begin(), 4, grid.header.magic.begin());
  if (grid.header.magic != expected_magic) {
    throw IoError(path.string() + ": bad magic, expected " +
                  std::string(expected_magic.begin(), expected_magic.end()));
  }
  const char* p = bytes.data() + 4;
  grid.header.version = le::get<std::uint16_t>(p);
  grid.header.bins = le::get<std::uint16_t>(p + 2);
  grid.header.height = le::get<std::uint16_t>(p + 4);
  grid.header.width = le::get<std::uint16_t>(p + 6);
  grid.header.t_start = le::get<std::uint64_t>(p + 8);
  grid.header.t_end = le::get<std::uint64_t>(p + 16);
  if (grid.header.version != 1) {
    throw IoError(path.string() + ": unsupported version " + std::to_string(grid.header.version));
  }
  const std::size_t n =
      static_cast<std::size_t>(grid.header.bins) * grid.header.height * grid.header.width;
  if (bytes.size() != kGridHeaderSize + 4 * n) {
    throw IoError(path.string() + ": expected " + std::to_string(n) + " values, found " +
                  std::to_string((bytes.size() - kGridHeaderSize) / 4));
  }
  grid.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.values[i] = le::get_f32(bytes.data() + kGridHeaderSize + 4 * i);
  }
  return grid;
}

}  // namespace evtforge
