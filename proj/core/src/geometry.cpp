#include "evtforge/geometry.hpp"

#include "evtforge/binary_io.hpp"
#include "evtforge/error.hpp"
#include "evtforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evtforge {

namespace {

// Projections that overshoot the image border by less than this (from
// round-off in K^-1 followed by K) are snapped back inside.
constexpr double kBorderSnap = 1e-9;

double snap(double v, double hi) {
  if (v < 0.0 && v > -kBorderSnap) return 0.0;
  if (v > hi && v < hi + kBorderSnap) return hi;
  return v;
}

}  // namespace

BackprojectResult backproject(std::span<const Event> events, const DepthMap& depth,
                              const CameraModel& cam) {
  BackprojectResult out;
  auto& cloud = out.cloud;
  cloud.points.reserve(events.size());
  cloud.polarity.reserve(events.size());
  cloud.source_t.reserve(events.size());
  const double inv_fx = 1.0 / cam.fx();
  const double inv_fy = 1.0 / cam.fy();
  for (const Event& e : events) {
    if (e.x >= depth.width() || e.y >= depth.height() || !depth.valid(e.x, e.y)) {
      ++out.dropped;
      continue;
    }
    const double d = depth.depth(e.x, e.y);
    cloud.points.emplace_back(d * (e.x - cam.cx()) * inv_fx, d * (e.y - cam.cy()) * inv_fy, d);
    cloud.polarity.push_back(e.p);
    cloud.source_t.push_back(e.t);
  }
  return out;
}

PointCloud3D warp_points(const PointCloud3D& cloud, const RigidPose& pose) {
  PointCloud3D out;
  out.points.resize(cloud.points.size());
  const Eigen::Matrix3d& r = pose.rotation();
  const Eigen::Vector3d& t = pose.translation();
  std::transform(cloud.points.begin(), cloud.points.end(), out.points.begin(),
                 [&](const Eigen::Vector3d& p) { return Eigen::Vector3d(r * p + t); });
  out.polarity = cloud.polarity;
  out.source_t = cloud.source_t;
  return out;
}

double WarpedEventImage::sum() const { return std::accumulate(accum.begin(), accum.end(), 0.0); }

bool splat_bilinear(WarpedEventImage& image, double u, double v, double weight) {
  const double max_u = image.width - 1;
  const double max_v = image.height - 1;
  u = snap(u, max_u);
  v = snap(v, max_v);
  if (!(u >= 0.0 && u <= max_u && v >= 0.0 && v <= max_v)) return false;

  const int x0 = static_cast<int>(u);
  const int y0 = static_cast<int>(v);
  const double ax = u - x0;
  const double ay = v - y0;
  const auto w = static_cast<std::size_t>(image.width);
  double* row = image.accum.data() + static_cast<std::size_t>(y0) * w;
  row[x0] += weight * (1.0 - ax) * (1.0 - ay);
  if (ax > 0.0) row[x0 + 1] += weight * ax * (1.0 - ay);
  if (ay > 0.0) {
    double* below = row + w;
    below[x0] += weight * (1.0 - ax) * ay;
    if (ax > 0.0) below[x0 + 1] += weight * ax * ay;
  }
  return true;
}

ProjectResult project_to_iwe(const PointCloud3D& cloud, const CameraModel& cam, int width,
                             int height, const IweOptions& options) {
  if (width <= 0 || height <= 0) throw DomainError("IWE size must be positive");
  if (options.shards == 0) throw DomainError("IWE shard count must be positive");
  ProjectResult out{WarpedEventImage(width, height), 0};
  const std::size_t n = cloud.size();
  if (n == 0) return out;

  const std::size_t shards = std::min(options.shards, n);
  std::vector<WarpedEventImage> partial(shards);
  std::vector<std::size_t> dropped(shards, 0);
  run_sharded(shards, options.threads, [&](std::size_t s) {
    WarpedEventImage& img = partial[s];
    img = WarpedEventImage(width, height);
    const auto [begin, end] = shard_range(n, shards, s);
    for (std::size_t i = begin; i < end; ++i) {
      const Eigen::Vector3d& p = cloud.points[i];
      if (!(p.z() > options.z_min)) {
        ++dropped[s];
        continue;
      }
      const double u = cam.fx() * p.x() / p.z() + cam.cx();
      const double v = cam.fy() * p.y() / p.z() + cam.cy();
      if (!splat_bilinear(img, u, v, sign(cloud.polarity[i]))) ++dropped[s];
    }
  });

  for (std::size_t s = 0; s < shards; ++s) {
    for (std::size_t i = 0; i < out.image.accum.size(); ++i) {
      out.image.accum[i] += partial[s].accum[i];
    }
    out.dropped += dropped[s];
  }
  return out;
}

WarpedEventImage accumulate_events(std::span<const Event> events, int width, int height) {
  WarpedEventImage img(width, height);
  for (const Event& e : events) {
    if (e.x < width && e.y < height) {
      img.accum[static_cast<std::size_t>(e.y) * width + e.x] += sign(e.p);
    }
  }
  return img;
}

double contrast_loss(const WarpedEventImage& image) {
  if (image.accum.empty()) throw DomainError("contrast_loss needs a non-empty image");
  const auto n = static_cast<double>(image.accum.size());
  const double mean = image.sum() / n;
  double ss = 0.0;
  for (double v : image.accum) ss += (v - mean) * (v - mean);
  return -ss / n;
}

void write_iwe(const std::filesystem::path& path, const WarpedEventImage& image, Timestamp t_start,
               Timestamp t_end) {
  GridHeader h;
  h.magic = {'E', 'I', 'W', 'E'};
  h.bins = 1;
  h.height = static_cast<std::uint16_t>(image.height);
  h.width = static_cast<std::uint16_t>(image.width);
  h.t_start = t_start;
  h.t_end = t_end;
  write_grid(path, h, image.accum);
}

WarpedEventImage read_iwe(const std::filesystem::path& path) {
  GridFile grid = read_grid(path, {'E', 'I', 'W', 'E'});
  if (grid.header.bins != 1) throw IoError(path.string() + ": IWE must have exactly one bin");
  WarpedEventImage img(grid.header.width, grid.header.height);
  std::copy(grid.values.begin(), grid.values.end(), img.accum.begin());
  return img;
}

void write_iwe_pgm(const std::filesystem::path& path, const WarpedEventImage& image) {
  const auto [lo_it, hi_it] = std::minmax_element(image.accum.begin(), image.accum.end());
  const double lo = lo_it == image.accum.end() ? 0.0 : *lo_it;
  const double hi = hi_it == image.accum.end() ? 0.0 : *hi_it;
  const double range = hi > lo ? hi - lo : 1.0;
  std::vector<char> buf;
  const std::string header =
      "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  buf.assign(header.begin(), header.end());
  for (double v : image.accum) {
    buf.push_back(static_cast<char>(std::lround((v - lo) / range * 255.0)));
  }
  AtomicFile out(path);
  out.write(buf);
  out.commit();
}

}  // namespace evtforge
