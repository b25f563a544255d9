#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace evtforge {

/// Microseconds since the start of a recording.
using Timestamp = std::uint64_t;

inline constexpr double kMicrosPerSecond = 1e6;

enum class Polarity : std::int8_t { Negative = -1, Positive = 1 };

/// Throws DomainError unless value is +1 or -1.
Polarity to_polarity(int value);

inline constexpr int sign(Polarity p) { return static_cast<int>(p); }

struct Event {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Timestamp t = 0;
  Polarity p = Polarity::Positive;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Stream order: t, then y, then x, then polarity (negative first).
inline bool event_less(const Event& a, const Event& b) {
  if (a.t != b.t) return a.t < b.t;
  if (a.y != b.y) return a.y < b.y;
  if (a.x != b.x) return a.x < b.x;
  return sign(a.p) < sign(b.p);
}

struct EventStream {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<Event> events;
  std::string source_id;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }

  friend bool operator==(const EventStream&, const EventStream&) = default;
};

enum class ViolationKind { Order, Bounds, Polarity };

struct Violation {
  ViolationKind kind;
  std::size_t index;  // first offending event
  std::string message;
};

/// Reports at most one violation per kind, each naming the first offending
/// event. An empty result means the stream is sorted and in bounds.
std::vector<Violation> validate_stream(const EventStream& stream);

/// Pinhole intrinsics.
class CameraModel {
 public:
  CameraModel(double fx, double fy, double cx, double cy);

  double fx() const { return fx_; }
  double fy() const { return fy_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }

  Eigen::Matrix3d matrix() const;
  Eigen::Matrix3d inverse() const;

 private:
  double fx_, fy_, cx_, cy_;
};

/// Rigid transform x' = R x + t. Rotation orthonormality is checked on
/// construction to within 1e-9.
class RigidPose {
 public:
  RigidPose();
  RigidPose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static RigidPose identity() { return RigidPose(); }
  /// Rotation from an axis-angle vector (radians), then translation.
  static RigidPose from_axis_angle(const Eigen::Vector3d& rotvec,
                                   const Eigen::Vector3d& translation);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& point) const {
    return rotation_ * point + translation_;
  }

  /// (*this) after `first`: x -> R2 (R1 x + t1) + t2.
  RigidPose after(const RigidPose& first) const;
  RigidPose inverse() const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// Per-pixel metric depth with a validity mask. Row-major.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height);
  /// Every pixel valid at a constant depth.
  static DepthMap constant(int width, int height, double depth);
  DepthMap(int width, int height, std::vector<double> depth, std::vector<std::uint8_t> valid);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return depth_.size(); }

  double depth(int x, int y) const { return depth_[index(x, y)]; }
  bool valid(int x, int y) const { return valid_[index(x, y)] != 0; }
  double depth_at(std::size_t i) const { return depth_[i]; }
  bool valid_at(std::size_t i) const { return valid_[i] != 0; }

  /// Sets depth and marks the pixel valid; depth must be > 0.
  void set(int x, int y, double depth);
  void invalidate(int x, int y);

  std::size_t valid_count() const;

  const std::vector<double>& depth_data() const { return depth_; }
  const std::vector<std::uint8_t>& valid_data() const { return valid_; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> depth_;
  std::vector<std::uint8_t> valid_;
};

}  // namespace evtforge
