#pragma once

#include "evtforge/types.hpp"

#include <string>

namespace evtforge {

inline constexpr double kDefaultLambda = 0.6;
inline constexpr int kDefaultScales = 4;

/// Residual used by the depth losses. Linear is |pred - gt| in metres;
/// Log is |ln pred - ln gt|, the classical scale-invariant variant.
enum class ResidualMode { Linear, Log };

/// (1/n) sum R^2 - (1/n^2) (sum R)^2 over jointly valid pixels.
double si_loss(const DepthMap& pred, const DepthMap& gt, ResidualMode mode = ResidualMode::Linear);

/// Multi-scale Sobel gradient matching on the residual map, normalized by
/// the number of jointly valid pixels at full resolution. Each coarser scale
/// is a 2x2 average pool of the previous one (odd trailing rows/columns are
/// dropped; a pooled pixel is valid only if all four inputs were). Sobel
/// windows that touch an invalid pixel or the image border are skipped.
double grad_loss(const DepthMap& pred, const DepthMap& gt, int scales = kDefaultScales,
                 ResidualMode mode = ResidualMode::Linear);

/// Mean |a - b| over jointly valid pixels.
double l1_loss(const DepthMap& a, const DepthMap& b);

struct LossReport {
  double si = 0.0;
  double grad = 0.0;
  double contrast = 0.0;
  double l1_distill = 0.0;
  double teacher = 0.0;
  double student = 0.0;
  double lambda = kDefaultLambda;
};

/// si + lambda * grad.
LossReport teacher_loss(const DepthMap& pred, const DepthMap& gt, double lambda = kDefaultLambda,
                        int scales = kDefaultScales, ResidualMode mode = ResidualMode::Linear);

/// contrast + (1 - lambda) * mean |d_teacher - d_student|.
LossReport student_loss(double contrast, const DepthMap& d_teacher, const DepthMap& d_student,
                        double lambda = kDefaultLambda);

/// One `key=value` line per field, keys sorted, values printed with
/// round-trip precision.
std::string format_report(const LossReport& report);

}  // namespace evtforge
