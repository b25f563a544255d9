#pragma once

#include "evtforge/types.hpp"

#include <filesystem>
#include <vector>

namespace evtforge {

inline constexpr double kDefaultEpsLog = 1e-3;

/// Linear intensity image in [0, 1], row-major.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<double> intensity;
  Timestamp t = 0;
};

/// ln(intensity + eps_log), row-major.
struct LogFrame {
  int width = 0;
  int height = 0;
  std::vector<double> log_l;
  Timestamp t = 0;

  double at(int x, int y) const {
    return log_l[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(x)];
  }
};

/// Name of the optional per-frame timestamp sidecar (one microsecond value
/// per line, one line per frame).
inline constexpr const char* kTimestampSidecar = "timestamps.txt";

/// Loads every .pgm/.png in `directory` in lexicographic order. 8- and
/// 16-bit grayscale are normalized by their maximum; colour images are
/// reduced with Rec. 601 luma weights. Without a sidecar, frame i is placed
/// at floor(i * 1e6 / fps_hint) microseconds. Decoding runs on `threads`
/// workers; output order always matches file order.
std::vector<Frame> load_sequence(const std::filesystem::path& directory, double fps_hint,
                                 int threads = 0);

LogFrame to_log(const Frame& frame, double eps_log = kDefaultEpsLog);

/// Inverse of to_log: exp(log_l) - eps_log.
Frame from_log(const LogFrame& frame, double eps_log = kDefaultEpsLog);

/// Writes an 8-bit (or 16-bit when `sixteen_bit`) binary PGM, quantizing
/// intensity by rounding. Used for fixtures and debug renders.
void write_pgm(const std::filesystem::path& path, const Frame& frame, bool sixteen_bit = false);

}  // namespace evtforge
