#pragma once

#include "evtforge/types.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <span>
#include <vector>

namespace evtforge {

/// Points closer than this to the camera plane are not projected.
inline constexpr double kMinProjectionDepth = 1e-3;

struct PointCloud3D {
  std::vector<Eigen::Vector3d> points;
  std::vector<Polarity> polarity;
  std::vector<Timestamp> source_t;

  std::size_t size() const { return points.size(); }
};

struct BackprojectResult {
  PointCloud3D cloud;
  std::size_t dropped = 0;  // events on invalid or out-of-map depth pixels
};

/// point = depth(x, y) * K^-1 (x, y, 1).
BackprojectResult backproject(std::span<const Event> events, const DepthMap& depth,
                              const CameraModel& cam);

/// point' = R point + t for every point.
PointCloud3D warp_points(const PointCloud3D& cloud, const RigidPose& pose);

struct WarpedEventImage {
  int width = 0;
  int height = 0;
  std::vector<double> accum;

  WarpedEventImage() = default;
  WarpedEventImage(int w, int h)
      : width(w), height(h), accum(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0) {}

  double at(int x, int y) const {
    return accum[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(x)];
  }
  double sum() const;
};

struct IweOptions {
  double z_min = kMinProjectionDepth;
  std::size_t shards = 8;
  int threads = 1;
};

struct ProjectResult {
  WarpedEventImage image;
  std::size_t dropped = 0;  // behind z_min or outside the image
};

/// Bilinearly splats each point's polarity at (fx X/Z + cx, fy Y/Z + cy).
/// A point is kept only if its projection lies in [0, W-1] x [0, H-1], so
/// every kept point deposits its full signed mass.
ProjectResult project_to_iwe(const PointCloud3D& cloud, const CameraModel& cam, int width,
                             int height, const IweOptions& options = {});

/// Adds `weight` at subpixel (u, v) with bilinear weights. Returns false and
/// leaves the image untouched when (u, v) is outside [0, W-1] x [0, H-1].
bool splat_bilinear(WarpedEventImage& image, double u, double v, double weight);

/// Unwarped polarity image: each event adds p at its own pixel.
WarpedEventImage accumulate_events(std::span<const Event> events, int width, int height);

/// Negative variance of the image over all of its pixels.
double contrast_loss(const WarpedEventImage& image);

/// Writes the EIWE grid (the EVOL layout with one bin).
void write_iwe(const std::filesystem::path& path, const WarpedEventImage& image,
               Timestamp t_start = 0, Timestamp t_end = 0);
WarpedEventImage read_iwe(const std::filesystem::path& path);

/// 8-bit PGM render, affinely mapping [min, max] to [0, 255].
void write_iwe_pgm(const std::filesystem::path& path, const WarpedEventImage& image);

}  // namespace evtforge
