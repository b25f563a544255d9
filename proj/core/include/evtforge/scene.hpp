#pragma once

#include "evtforge/ingest.hpp"
#include "evtforge/sampler.hpp"
#include "evtforge/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace evtforge {

/// Bright stroke painted on the scene plane. Endpoints are world X/Y in
/// metres on the plane Z = plane_depth; the cross profile is Gaussian with
/// standard deviation `half_width`.
struct PlaneSegment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
  double half_width = 0.01;
  double intensity = 0.9;
};

/// Textured fronto-parallel plane seen by a camera moving with constant
/// linear and angular velocity. At t = 0 the camera sits at the world
/// origin looking down +Z.
struct SyntheticScene {
  CameraModel camera{100.0, 100.0, 63.5, 47.5};
  int width = 128;
  int height = 96;
  double plane_depth = 2.0;
  double background = 0.15;
  std::vector<PlaneSegment> segments;
  Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();   // m/s, world frame
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();  // rad/s, axis-angle rate
  Timestamp duration = 166666;
};

/// Camera-to-world pose at time t.
RigidPose camera_pose(const SyntheticScene& scene, Timestamp t);

/// Motion taking points from the camera frame at `t_to` into the camera
/// frame at `t_from`: P_from = R P_to + t. For a camera translating by +d
/// between the two times, the translation is +d.
RigidPose relative_pose(const SyntheticScene& scene, Timestamp t_from, Timestamp t_to);

/// Linear intensity image of the scene at time t.
Frame rasterize(const SyntheticScene& scene, Timestamp t);

/// Per-pixel camera-frame depth of the plane at time t.
DepthMap scene_depth(const SyntheticScene& scene, Timestamp t);

struct PoseSample {
  Timestamp t;
  RigidPose camera_to_world;
};

struct RenderedScene {
  EventStream stream;
  SamplePlan plan;
  std::vector<PoseSample> poses;  // at every window boundary
  DepthMap depth;                 // at t = 0
};

struct RenderOptions {
  double source_fps = 1000.0;     // uniform frames that drive the sampler
  Timestamp window = 166666;      // pose sidecar spacing
  double eps_log = kDefaultEpsLog;
  int threads = 1;
};

/// Renders uniform source frames to build an adaptive sample plan, then
/// rasterizes the scene exactly at every planned time and feeds those
/// frames through the event generator.
RenderedScene render_scene_events(const SyntheticScene& scene, const SamplerConfig& cfg,
                                  const RenderOptions& options = {});

struct SceneFixtureOptions {
  int segments = 6;
  double speed_x = 1.2;  // m/s
  double plane_depth = 2.0;
};

/// Random strokes on the plane, biased towards vertical so that horizontal
/// motion produces events, with the camera translating along +x.
SyntheticScene random_translating_scene(std::uint64_t seed, const SceneFixtureOptions& options = {});

}  // namespace evtforge
