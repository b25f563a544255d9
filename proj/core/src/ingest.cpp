#include "evtforge/ingest.hpp"

#include "evtforge/error.hpp"
#include "evtforge/parallel.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace evtforge {
namespace fs = std::filesystem;

namespace {

bool is_frame_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm" || ext == ".png";
}

Frame decode_frame(const fs::path& path) {
  const cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) throw IoError("cannot read frame " + path.string());

  double max_value = 0.0;
  switch (raw.depth()) {
    case CV_8U: max_value = 255.0; break;
    case CV_16U: max_value = 65535.0; break;
    default: throw IoError("unsupported bit depth in " + path.string());
  }

  cv::Mat gray;
  raw.convertTo(gray, CV_64F, 1.0 / max_value);
  const int channels = raw.channels();
  Frame frame;
  frame.width = raw.cols;
  frame.height = raw.rows;
  frame.intensity.resize(static_cast<std::size_t>(raw.cols) * raw.rows);
  for (int y = 0; y < raw.rows; ++y) {
    const double* row = gray.ptr<double>(y);
    for (int x = 0; x < raw.cols; ++x) {
      double v = 0.0;
      if (channels == 1) {
        v = row[x];
      } else if (channels == 3 || channels == 4) {
        // OpenCV stores colour as BGR(A).
        const double* px = row + static_cast<std::ptrdiff_t>(x) * channels;
        v = 0.114 * px[0] + 0.587 * px[1] + 0.299 * px[2];
      } else {
        throw IoError("unsupported channel count in " + path.string());
      }
      frame.intensity[static_cast<std::size_t>(y) * raw.cols + x] = std::clamp(v, 0.0, 1.0);
    }
  }
  return frame;
}

std::vector<Timestamp> read_sidecar(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read timestamps " + path.string());
  std::vector<Timestamp> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    Timestamp t = 0;
    if (!(ss >> t)) throw IoError("malformed timestamp line '" + line + "' in " + path.string());
    out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<Frame> load_sequence(const fs::path& directory, double fps_hint, int threads) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw IoError("cannot read frames: " + directory.string() + " is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && is_frame_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("cannot read frames: no .pgm/.png files in " + directory.string());

  std::vector<Timestamp> stamps;
  const fs::path sidecar = directory / kTimestampSidecar;
  if (fs::exists(sidecar)) {
    stamps = read_sidecar(sidecar);
    if (stamps.size() != files.size()) {
      throw IoError("timestamp sidecar has " + std::to_string(stamps.size()) +
                    " entries for " + std::to_string(files.size()) + " frames");
    }
    for (std::size_t i = 1; i < stamps.size(); ++i) {
      if (stamps[i] <= stamps[i - 1]) {
        throw DomainError("non-monotone timestamps in " + sidecar.string() + " at line " +
                          std::to_string(i + 1));
      }
    }
  } else {
    if (!(fps_hint > 0.0)) throw DomainError("fps hint must be positive");
    stamps.resize(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
      stamps[i] = static_cast<Timestamp>(std::floor(static_cast<double>(i) * kMicrosPerSecond / fps_hint));
      if (i > 0 && stamps[i] <= stamps[i - 1]) {
        throw DomainError("fps hint too high for microsecond timestamps");
      }
    }
  }

  std::vector<Frame> frames(files.size());
  run_sharded(files.size(), threads, [&](std::size_t i) {
    frames[i] = decode_frame(files[i]);
    frames[i].t = stamps[i];
  });

  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].width != frames[0].width || frames[i].height != frames[0].height) {
      throw DomainError("frame " + files[i].filename().string() + " is " +
                        std::to_string(frames[i].width) + "x" + std::to_string(frames[i].height) +
                        ", expected " + std::to_string(frames[0].width) + "x" +
                        std::to_string(frames[0].height));
    }
  }
  return frames;
}

LogFrame to_log(const Frame& frame, double eps_log) {
  if (!(eps_log > 0.0)) throw DomainError("eps_log must be positive");
  LogFrame out{frame.width, frame.height, std::vector<double>(frame.intensity.size()), frame.t};
  std::transform(frame.intensity.begin(), frame.intensity.end(), out.log_l.begin(),
                 [eps_log](double v) { return std::log(v + eps_log); });
  return out;
}

Frame from_log(const LogFrame& frame, double eps_log) {
  if (!(eps_log > 0.0)) throw DomainError("eps_log must be positive");
  Frame out{frame.width, frame.height, std::vector<double>(frame.log_l.size()), frame.t};
  std::transform(frame.log_l.begin(), frame.log_l.end(), out.intensity.begin(),
                 [eps_log](double v) { return std::exp(v) - eps_log; });
  return out;
}

void write_pgm(const fs::path& path, const Frame& frame, bool sixteen_bit) {
  const int max_value = sixteen_bit ? 65535 : 255;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << frame.width << " " << frame.height << "\n" << max_value << "\n";
  for (double v : frame.intensity) {
    const auto q = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * max_value));
    if (sixteen_bit) {
      // PGM stores 16-bit samples big-endian.
      const char bytes[2] = {static_cast<char>(q >> 8), static_cast<char>(q & 0xff)};
      out.write(bytes, 2);
    } else {
      out.put(static_cast<char>(q));
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace evtforge
