#include "evtforge/cm_optimizer.hpp"

#include "evtforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace evtforge {

namespace {

constexpr const char* kParamNames[kMotionParams] = {"tx", "ty", "tz", "rx", "ry", "rz", "depth0"};
constexpr double kInvPhi = 0.6180339887498949;
constexpr int kGoldenIterations = 14;
constexpr int kMaxExpansions = 12;
constexpr int kMaxShrinks = 6;

}  // namespace

const char* param_name(MotionParam p) { return kParamNames[static_cast<int>(p)]; }

std::bitset<kMotionParams> parse_param_mask(const std::string& text) {
  std::bitset<kMotionParams> mask;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto* it = std::find_if(std::begin(kParamNames), std::end(kParamNames),
                                  [&](const char* n) { return item == n; });
    if (it == std::end(kParamNames)) throw DomainError("unknown motion parameter '" + item + "'");
    mask.set(static_cast<std::size_t>(it - std::begin(kParamNames)));
  }
  if (mask.none()) throw DomainError("parameter mask is empty");
  return mask;
}

double MotionHypothesis::get(MotionParam p) const {
  if (p == MotionParam::Depth0) return depth0.value_or(0.0);
  return motion[static_cast<std::size_t>(p)];
}

void MotionHypothesis::set(MotionParam p, double value) {
  if (p == MotionParam::Depth0) {
    depth0 = value;
  } else {
    motion[static_cast<std::size_t>(p)] = value;
  }
}

RigidPose MotionHypothesis::pose() const {
  return RigidPose::from_axis_angle(Eigen::Vector3d(motion[3], motion[4], motion[5]),
                                    Eigen::Vector3d(motion[0], motion[1], motion[2]));
}

// --- objective --------------------------------------------------------

ContrastObjective::ContrastObjective(const EventStream& stream, const CameraModel& camera,
                                     Timestamp t_start, Timestamp t_end,
                                     std::optional<DepthMap> depth, IweOptions iwe)
    : camera_(camera),
      width_(stream.width),
      height_(stream.height),
      iwe_(iwe),
      split_(t_start + (t_end - t_start) / 2),
      depth_(std::move(depth)) {
  if (t_start >= t_end) throw DomainError("objective window must satisfy t_start < t_end");
  if (stream.empty()) throw DomainError("no usable events: stream is empty");
  if (width_ <= 0 || height_ <= 0) throw DomainError("stream has no sensor size");
  if (depth_ && (depth_->width() != width_ || depth_->height() != height_)) {
    throw DomainError("depth map does not match the sensor size");
  }

  std::vector<Event> reference, moving;
  for (const Event& e : stream.events) {
    if (e.t < t_start || e.t > t_end) continue;
    (e.t < split_ ? reference : moving).push_back(e);
  }
  reference_count_ = reference.size();
  reference_ = accumulate_events(reference, width_, height_);

  const DepthMap unit = DepthMap::constant(width_, height_, 1.0);
  BackprojectResult bp = backproject(moving, depth_ ? *depth_ : unit, camera_);
  moving_ = std::move(bp.cloud);
  dropped_ = bp.dropped;
  if (moving_.size() == 0) throw DomainError("no usable events in the second half of the window");

  plain_ = reference_;
  const WarpedEventImage rest = accumulate_events(moving, width_, height_);
  for (std::size_t i = 0; i < plain_.accum.size(); ++i) plain_.accum[i] += rest.accum[i];
}

PointCloud3D ContrastObjective::moving_cloud(const MotionHypothesis& h) const {
  if (depth_) return moving_;
  if (!h.depth0) throw DomainError("hypothesis needs depth0 when no depth map is given");
  if (!(*h.depth0 > 0.0)) throw DomainError("depth0 must be positive");
  PointCloud3D cloud = moving_;
  for (auto& p : cloud.points) p *= *h.depth0;
  return cloud;
}

WarpedEventImage ContrastObjective::image(const MotionHypothesis& h) const {
  const PointCloud3D warped = warp_points(moving_cloud(h), h.pose());
  WarpedEventImage img = project_to_iwe(warped, camera_, width_, height_, iwe_).image;
  for (std::size_t i = 0; i < img.accum.size(); ++i) img.accum[i] += reference_.accum[i];
  return img;
}

double ContrastObjective::operator()(const MotionHypothesis& h) const {
  return contrast_loss(image(h));
}

// --- optimizer --------------------------------------------------------

double finite_difference(const ContrastObjective& objective, const MotionHypothesis& at,
                         MotionParam p, double h) {
  MotionHypothesis plus = at, minus = at;
  plus.set(p, at.get(p) + h);
  minus.set(p, at.get(p) - h);
  return (objective(plus) - objective(minus)) / (2.0 * h);
}

namespace {

class BudgetedObjective {
 public:
  BudgetedObjective(const ContrastObjective& f, int budget, double min_depth)
      : f_(f), remaining_(budget), min_depth_(min_depth) {}

  bool exhausted() const { return remaining_ <= 0; }
  int used() const { return used_; }

  /// NaN when the budget is spent; +inf for an infeasible depth.
  double operator()(const MotionHypothesis& h) {
    if (remaining_ <= 0) return std::numeric_limits<double>::quiet_NaN();
    --remaining_;
    ++used_;
    if (h.depth0 && !(*h.depth0 > min_depth_)) return std::numeric_limits<double>::infinity();
    return f_(h);
  }

 private:
  const ContrastObjective& f_;
  int remaining_;
  int used_ = 0;
  double min_depth_;
};

struct LinePoint {
  double alpha;
  double loss;
};

}  // namespace

OptimizeResult optimize_motion(const ContrastObjective& objective, const MotionHypothesis& init,
                               const OptimizerOptions& options) {
  if (options.budget < 1) throw DomainError("optimizer budget must be at least 1");
  if (options.mask.none()) throw DomainError("no parameters enabled");
  if (options.mask.test(static_cast<std::size_t>(MotionParam::Depth0)) && !init.depth0) {
    throw DomainError("depth0 is enabled but has no initial value");
  }

  BudgetedObjective f(objective, options.budget, options.min_depth);
  OptimizeResult result;
  result.best = init;
  result.loss = f(init);
  result.initial_loss = result.loss;
  int iteration = 0;
  result.trace.push_back({iteration, f.used(), result.best, result.loss});

  std::array<double, kMotionParams> step = options.initial_step;
  if (init.depth0) step[6] *= *init.depth0;

  for (int sweep = 0; sweep < options.sweeps && !f.exhausted(); ++sweep) {
    for (int k = 0; k < kMotionParams && !f.exhausted(); ++k) {
      if (!options.mask.test(static_cast<std::size_t>(k))) continue;
      const auto param = static_cast<MotionParam>(k);
      const MotionHypothesis x = result.best;
      const double x0 = x.get(param);
      auto at = [&](double alpha, double dir) {
        MotionHypothesis h = x;
        h.set(param, x0 + dir * alpha);
        return h;
      };

      MotionHypothesis probe_plus = at(options.fd_step, 1.0);
      MotionHypothesis probe_minus = at(options.fd_step, -1.0);
      const double f_plus = f(probe_plus);
      const double f_minus = f(probe_minus);
      if (std::isnan(f_plus) || std::isnan(f_minus)) break;
      const double slope = (f_plus - f_minus) / (2.0 * options.fd_step);
      if (slope == 0.0 || !std::isfinite(slope)) continue;
      const double dir = slope > 0.0 ? -1.0 : 1.0;

      LinePoint lo{0.0, result.loss};
      LinePoint best{0.0, result.loss};
      LinePoint hi{step[k], f(at(step[k], dir))};
      if (std::isnan(hi.loss)) break;

      bool bracketed = false;
      if (hi.loss < lo.loss) {
        // Expand until the loss turns up again.
        LinePoint mid = hi;
        for (int e = 0; e < kMaxExpansions; ++e) {
          LinePoint next{2.0 * mid.alpha, f(at(2.0 * mid.alpha, dir))};
          if (std::isnan(next.loss)) break;
          if (next.loss >= mid.loss) {
            hi = next;
            bracketed = true;
            break;
          }
          lo = mid;
          mid = next;
        }
        best = mid;
        if (!bracketed) hi = mid;
      } else {
        // Backtrack towards the current point.
        for (int s = 0; s < kMaxShrinks; ++s) {
          LinePoint trial{0.5 * hi.alpha, f(at(0.5 * hi.alpha, dir))};
          if (std::isnan(trial.loss)) break;
          if (trial.loss < lo.loss) {
            best = trial;
            bracketed = true;
            break;
          }
          hi = trial;
        }
      }

      if (bracketed) {
        // Golden-section search on [lo, hi] keeping the best point seen.
        double a = lo.alpha, b = hi.alpha;
        double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
        double fc = f(at(c, dir)), fd = f(at(d, dir));
        for (int g = 0; g < kGoldenIterations && !std::isnan(fc) && !std::isnan(fd); ++g) {
          if (fc < best.loss) best = {c, fc};
          if (fd < best.loss) best = {d, fd};
          if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(at(c, dir));
          } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(at(d, dir));
          }
        }
        if (!std::isnan(fc) && fc < best.loss) best = {c, fc};
        if (!std::isnan(fd) && fd < best.loss) best = {d, fd};
      }
      // The finite-difference probes are candidates too.
      if (f_plus < best.loss && dir > 0.0) best = {options.fd_step, f_plus};
      if (f_minus < best.loss && dir < 0.0) best = {options.fd_step, f_minus};

      if (best.loss < result.loss) {
        result.best = at(best.alpha, dir);
        result.loss = best.loss;
        step[k] = std::max(best.alpha, 4.0 * options.fd_step);
      } else {
        step[k] *= 0.5;
      }
      result.trace.push_back({++iteration, f.used(), result.best, result.loss});
    }
  }

  result.evaluations = f.used();
  result.report.contrast = result.loss;
  return result;
}

std::string format_trace_csv(const std::vector<TraceRow>& trace) {
  std::string out = "iteration,evaluations,tx,ty,tz,rx,ry,rz,depth0,loss\n";
  char buf[64];
  for (const auto& row : trace) {
    out += std::to_string(row.iteration) + "," + std::to_string(row.evaluations);
    for (double v : row.params.motion) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    if (row.params.depth0) {
      std::snprintf(buf, sizeof buf, ",%.17g", *row.params.depth0);
      out += buf;
    } else {
      out += ",";
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", row.loss);
    out += buf;
  }
  return out;
}

}  // namespace evtforge
