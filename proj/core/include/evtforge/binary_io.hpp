#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace evtforge {

// Little-endian encoding helpers. All on-disk formats in this project are
// little-endian regardless of host byte order.
namespace le {

template <typename T>
inline void put(std::vector<char>& buf, T value) {
  static_assert(std::is_integral_v<T>);
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>(u & 0xffu));
    u = static_cast<U>(u >> 8);
  }
}

inline void put_f32(std::vector<char>& buf, float value) {
  std::uint32_t bits;
  std::memcpy(&bits, &value, sizeof bits);
  put(buf, bits);
}

template <typename T>
inline T get(const char* p) {
  static_assert(std::is_integral_v<T>);
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u = static_cast<U>(u | (static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i)));
  }
  return static_cast<T>(u);
}

inline float get_f32(const char* p) {
  const auto bits = get<std::uint32_t>(p);
  float value;
  std::memcpy(&value, &bits, sizeof value);
  return value;
}

}  // namespace le

/// Output file written under a temporary name and renamed into place on
/// commit(). Destroying an uncommitted AtomicFile removes the temporary.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path target);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ofstream& stream() { return out_; }
  void write(std::span<const char> bytes);
  void commit();

  const std::filesystem::path& target() const { return target_; }

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

/// Reads a whole file; throws IoError with the path on failure.
std::vector<char> read_file(const std::filesystem::path& path);

/// Dense float32 grid shared by the volume and IWE exports:
///   magic[4] | u16 version | u16 bins | u16 height | u16 width |
///   u64 t_start | u64 t_end | bins*height*width f32, row-major (b, y, x).
struct GridHeader {
  std::array<char, 4> magic{};
  std::uint16_t version = 1;
  std::uint16_t bins = 0;
  std::uint16_t height = 0;
  std::uint16_t width = 0;
  std::uint64_t t_start = 0;
  std::uint64_t t_end = 0;
};

inline constexpr std::size_t kGridHeaderSize = 28;

void write_grid(const std::filesystem::path& path, const GridHeader& header,
                std::span<const double> values);

struct GridFile {
  GridHeader header;
  std::vector<float> values;
};

GridFile read_grid(const std::filesystem::path& path, const std::array<char, 4>& expected_magic);

}  // namespace evtforge
