#include "evtforge/scene.hpp"

#include "evtforge/error.hpp"
#include "evtforge/generator.hpp"
#include "evtforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace evtforge {

namespace {

double seconds(Timestamp t) { return static_cast<double>(t) / kMicrosPerSecond; }

double segment_distance(const Eigen::Vector2d& p, const PlaneSegment& s) {
  const Eigen::Vector2d ab = s.b - s.a;
  const double len2 = ab.squaredNorm();
  const double u = len2 > 0.0 ? std::clamp((p - s.a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (s.a + u * ab)).norm();
}

// Ray parameter (= camera-frame depth) of the plane hit for pixel (x, y).
double plane_hit(const SyntheticScene& scene, const RigidPose& pose, double x, double y,
                 Eigen::Vector2d* world_xy) {
  const Eigen::Vector3d ray_cam = scene.camera.inverse() * Eigen::Vector3d(x, y, 1.0);
  const Eigen::Vector3d ray = pose.rotation() * ray_cam;
  const Eigen::Vector3d& origin = pose.translation();
  if (!(ray.z() > 0.0)) return -1.0;
  const double s = (scene.plane_depth - origin.z()) / ray.z();
  if (world_xy) *world_xy = (origin + s * ray).head<2>();
  return s;
}

}  // namespace

RigidPose camera_pose(const SyntheticScene& scene, Timestamp t) {
  const double ts = seconds(t);
  return RigidPose::from_axis_angle(scene.angular_velocity * ts, scene.linear_velocity * ts);
}

RigidPose relative_pose(const SyntheticScene& scene, Timestamp t_from, Timestamp t_to) {
  return camera_pose(scene, t_from).inverse().after(camera_pose(scene, t_to));
}

Frame rasterize(const SyntheticScene& scene, Timestamp t) {
  const RigidPose pose = camera_pose(scene, t);
  Frame frame;
  frame.width = scene.width;
  frame.height = scene.height;
  frame.t = t;
  frame.intensity.resize(static_cast<std::size_t>(scene.width) * scene.height);
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      Eigen::Vector2d p;
      if (plane_hit(scene, pose, x, y, &p) <= 0.0) {
        throw DomainError("scene plane is not in front of the camera");
      }
      double v = scene.background;
      for (const auto& s : scene.segments) {
        const double d = segment_distance(p, s) / s.half_width;
        v = std::max(v, scene.background + (s.intensity - scene.background) * std::exp(-0.5 * d * d));
      }
      frame.intensity[static_cast<std::size_t>(y) * scene.width + x] = std::clamp(v, 0.0, 1.0);
    }
  }
  return frame;
}

DepthMap scene_depth(const SyntheticScene& scene, Timestamp t) {
  const RigidPose pose = camera_pose(scene, t);
  DepthMap depth(scene.width, scene.height);
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      const double s = plane_hit(scene, pose, x, y, nullptr);
      if (s > 0.0) depth.set(x, y, s);
    }
  }
  return depth;
}

RenderedScene render_scene_events(const SyntheticScene& scene, const SamplerConfig& cfg,
                                  const RenderOptions& options) {
  if (scene.duration == 0) throw DomainError("scene duration must be positive");
  if (scene.segments.empty()) throw DomainError("scene has no segments");
  if (!(options.source_fps > 0.0)) throw DomainError("source_fps must be positive");
  if (scene.width <= 0 || scene.height <= 0) throw DomainError("scene size must be positive");

  // Uniform source frames drive the adaptive plan.
  const auto step = std::max<Timestamp>(
      1, static_cast<Timestamp>(std::llround(kMicrosPerSecond / options.source_fps)));
  std::vector<Timestamp> source_times;
  for (Timestamp t = 0; t < scene.duration; t += step) source_times.push_back(t);
  source_times.push_back(scene.duration);
  std::vector<LogFrame> source(source_times.size());
  run_sharded(source_times.size(), options.threads, [&](std::size_t i) {
    source[i] = to_log(rasterize(scene, source_times[i]), options.eps_log);
  });

  RenderedScene out;
  out.plan = build_plan(source, cfg, options.threads);
  source.clear();

  out.stream.width = static_cast<std::uint16_t>(scene.width);
  out.stream.height = static_cast<std::uint16_t>(scene.height);
  out.stream.source_id = "synthetic-scene";
  EventGenerator gen(to_log(rasterize(scene, out.plan.times.front()), options.eps_log),
                     cfg.contrast_c, options.threads);
  for (std::size_t k = 1; k < out.plan.times.size(); ++k) {
    gen.step(to_log(rasterize(scene, out.plan.times[k]), options.eps_log), out.stream.events);
  }

  const Timestamp window = options.window > 0 ? options.window : scene.duration;
  for (Timestamp t = 0; t < scene.duration; t += window) {
    out.poses.push_back({t, camera_pose(scene, t)});
  }
  out.poses.push_back({scene.duration, camera_pose(scene, scene.duration)});
  out.depth = scene_depth(scene, 0);
  return out;
}

SyntheticScene random_translating_scene(std::uint64_t seed, const SceneFixtureOptions& options) {
  if (options.segments < 1) throw DomainError("fixture needs at least one segment");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SyntheticScene scene;
  scene.plane_depth = options.plane_depth;
  scene.linear_velocity = Eigen::Vector3d(options.speed_x, 0.0, 0.0);

  // Visible plane extent at t = 0, shrunk so strokes stay in view.
  const double half_w = 0.8 * (scene.width / 2.0) / scene.camera.fx() * scene.plane_depth;
  const double half_h = 0.8 * (scene.height / 2.0) / scene.camera.fy() * scene.plane_depth;
  for (int i = 0; i < options.segments; ++i) {
    const Eigen::Vector2d centre((2.0 * unit(rng) - 1.0) * half_w, (2.0 * unit(rng) - 1.0) * half_h);
    const double angle = (unit(rng) - 0.5) * 1.2;  // radians off vertical
    const double length = (0.3 + 0.5 * unit(rng)) * half_h;
    const Eigen::Vector2d dir(std::sin(angle), std::cos(angle));
    PlaneSegment s;
    s.a = centre - 0.5 * length * dir;
    s.b = centre + 0.5 * length * dir;
    s.half_width = (0.8 + 0.8 * unit(rng)) * scene.plane_depth / scene.camera.fx();
    s.intensity = 0.6 + 0.3 * unit(rng);
    scene.segments.push_back(s);
  }
  return scene;
}

}  // namespace evtforge
