#include "evtforge/types.hpp"

#include "evtforge/error.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evtforge {

Polarity to_polarity(int value) {
  if (value == 1) return Polarity::Positive;
  if (value == -1) return Polarity::Negative;
  throw DomainError("polarity must be +1 or -1, got " + std::to_string(value));
}

std::vector<Violation> validate_stream(const EventStream& stream) {
  std::vector<Violation> out;
  bool seen_order = false, seen_bounds = false, seen_polarity = false;
  const auto& ev = stream.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const Event& e = ev[i];
    if (!seen_bounds && (e.x >= stream.width || e.y >= stream.height)) {
      std::ostringstream msg;
      msg << "bounds violation at index " << i << ": (" << e.x << ", " << e.y
          << ") outside " << stream.width << "x" << stream.height;
      out.push_back({ViolationKind::Bounds, i, msg.str()});
      seen_bounds = true;
    }
    const int p = sign(e.p);
    if (!seen_polarity && p != 1 && p != -1) {
      out.push_back({ViolationKind::Polarity, i,
                     "polarity violation at index " + std::to_string(i)});
      seen_polarity = true;
    }
    if (!seen_order && i > 0 && event_less(e, ev[i - 1])) {
      out.push_back({ViolationKind::Order, i,
                     "order violation at index " + std::to_string(i)});
      seen_order = true;
    }
    if (seen_order && seen_bounds && seen_polarity) break;
  }
  std::sort(out.begin(), out.end(),
            [](const Violation& a, const Violation& b) { return a.index < b.index; });
  return out;
}

CameraModel::CameraModel(double fx, double fy, double cx, double cy)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy) {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw DomainError("camera focal lengths must be positive");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw DomainError("camera intrinsics must be finite");
  }
}

Eigen::Matrix3d CameraModel::matrix() const {
  Eigen::Matrix3d k;
  k << fx_, 0.0, cx_, 0.0, fy_, cy_, 0.0, 0.0, 1.0;
  return k;
}

Eigen::Matrix3d CameraModel::inverse() const {
  Eigen::Matrix3d k;
  k << 1.0 / fx_, 0.0, -cx_ / fx_, 0.0, 1.0 / fy_, -cy_ / fy_, 0.0, 0.0, 1.0;
  return k;
}

RigidPose::RigidPose()
    : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

RigidPose::RigidPose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  constexpr double kTol = 1e-9;
  const Eigen::Matrix3d gram = rotation_ * rotation_.transpose();
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > kTol) {
    throw DomainError("rotation matrix is not orthonormal");
  }
  if (std::abs(rotation_.determinant() - 1.0) > kTol) {
    throw DomainError("rotation matrix must have determinant +1");
  }
  if (!translation_.allFinite()) throw DomainError("translation must be finite");
}

RigidPose RigidPose::from_axis_angle(const Eigen::Vector3d& rotvec,
                                     const Eigen::Vector3d& translation) {
  const double angle = rotvec.norm();
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  if (angle > 0.0) r = Eigen::AngleAxisd(angle, rotvec / angle).toRotationMatrix();
  return RigidPose(r, translation);
}

RigidPose RigidPose::after(const RigidPose& first) const {
  return RigidPose(rotation_ * first.rotation_, rotation_ * first.translation_ + translation_);
}

RigidPose RigidPose::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  return RigidPose(rt, -(rt * translation_));
}

DepthMap::DepthMap(int width, int height)
    : width_(width),
      height_(height),
      depth_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), 0.0),
      valid_(depth_.size(), 0) {
  if (width < 0 || height < 0) throw DomainError("depth map dimensions must be non-negative");
}

DepthMap DepthMap::constant(int width, int height, double depth) {
  if (!(depth > 0.0)) throw DomainError("constant depth must be positive");
  DepthMap map(width, height);
  std::fill(map.depth_.begin(), map.depth_.end(), depth);
  std::fill(map.valid_.begin(), map.valid_.end(), 1);
  return map;
}

DepthMap::DepthMap(int width, int height, std::vector<double> depth,
                   std::vector<std::uint8_t> valid)
    : width_(width), height_(height), depth_(std::move(depth)), valid_(std::move(valid)) {
  const auto n = static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0);
  if (width < 0 || height < 0 || depth_.size() != n || valid_.size() != n) {
    throw DomainError("depth map buffers do not match " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (valid_[i] != 0 && !(depth_[i] > 0.0 && std::isfinite(depth_[i]))) {
      throw DomainError("valid depth pixel " + std::to_string(i) + " is not positive");
    }
  }
}

void DepthMap::set(int x, int y, double depth) {
  if (!(depth > 0.0 && std::isfinite(depth))) throw DomainError("depth must be positive");
  depth_[index(x, y)] = depth;
  valid_[index(x, y)] = 1;
}

void DepthMap::invalidate(int x, int y) { valid_[index(x, y)] = 0; }

std::size_t DepthMap::valid_count() const {
  return static_cast<std::size_t>(std::count_if(valid_.begin(), valid_.end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

}  // namespace evtforge
