#pragma once

#include "evtforge/geometry.hpp"
#include "evtforge/losses.hpp"
#include "evtforge/types.hpp"

#include <array>
#include <bitset>
#include <optional>
#include <string>
#include <vector>

namespace evtforge {

enum class MotionParam : int { Tx = 0, Ty, Tz, Rx, Ry, Rz, Depth0 };
inline constexpr int kMotionParams = 7;

const char* param_name(MotionParam p);
/// Parses a comma-separated list such as "tx,depth0".
std::bitset<kMotionParams> parse_param_mask(const std::string& text);

/// Rigid motion between the two halves of a window (translation in metres,
/// rotation as an axis-angle vector in radians), plus an optional constant
/// scene depth for the fronto-parallel plane model.
struct MotionHypothesis {
  std::array<double, 6> motion{};  // tx ty tz rx ry rz
  std::optional<double> depth0;

  double get(MotionParam p) const;
  void set(MotionParam p, double value);
  RigidPose pose() const;
};

/// Two-frame contrast objective over one time window. Events in the first
/// half form the reference image; events in the second half are
/// back-projected with the depth hypothesis, moved into the reference
/// camera by the hypothesis pose and splatted on top. The loss is the
/// negative variance of the combined image.
class ContrastObjective {
 public:
  /// Depth comes from `depth` when given, otherwise from each hypothesis's
  /// depth0.
  ContrastObjective(const EventStream& stream, const CameraModel& camera, Timestamp t_start,
                    Timestamp t_end, std::optional<DepthMap> depth = std::nullopt,
                    IweOptions iwe = {});

  double operator()(const MotionHypothesis& h) const;
  WarpedEventImage image(const MotionHypothesis& h) const;
  /// Reference plus unwarped second-half events.
  const WarpedEventImage& plain_image() const { return plain_; }

  std::size_t reference_events() const { return reference_count_; }
  std::size_t moving_events() const { return moving_.size(); }
  std::size_t dropped_events() const { return dropped_; }
  Timestamp split_time() const { return split_; }

 private:
  PointCloud3D moving_cloud(const MotionHypothesis& h) const;

  CameraModel camera_;
  int width_;
  int height_;
  IweOptions iwe_;
  Timestamp split_;
  std::optional<DepthMap> depth_;
  WarpedEventImage reference_;
  WarpedEventImage plain_;
  PointCloud3D moving_;  // depth-map points, or unit-depth rays for depth0
  std::size_t reference_count_ = 0;
  std::size_t dropped_ = 0;
};

struct OptimizerOptions {
  std::bitset<kMotionParams> mask{0b0000001};  // tx only
  int budget = 400;                             // objective evaluations
  int sweeps = 3;
  double fd_step = 1e-4;
  /// First trial step per parameter; the depth0 entry is relative.
  std::array<double, kMotionParams> initial_step{0.02, 0.02, 0.02, 0.01, 0.01, 0.01, 0.1};
  double min_depth = 1e-3;
};

struct TraceRow {
  int iteration = 0;
  int evaluations = 0;
  MotionHypothesis params;
  double loss = 0.0;  // best so far
};

struct OptimizeResult {
  MotionHypothesis best;
  double loss = 0.0;
  double initial_loss = 0.0;
  int evaluations = 0;
  std::vector<TraceRow> trace;
  LossReport report;  // contrast populated with the final loss
};

/// Central-difference derivative of the objective along one parameter.
double finite_difference(const ContrastObjective& objective, const MotionHypothesis& at,
                         MotionParam p, double h);

/// Coordinate descent: for each enabled parameter, a central-difference
/// slope picks the downhill direction, an expanding step brackets the
/// minimum along it and a golden-section search refines the bracket.
OptimizeResult optimize_motion(const ContrastObjective& objective, const MotionHypothesis& init,
                               const OptimizerOptions& options = {});

/// CSV with header "iteration,evaluations,tx,ty,tz,rx,ry,rz,depth0,loss".
std::string format_trace_csv(const std::vector<TraceRow>& trace);

}  // namespace evtforge
