#include "evtforge/losses.hpp"

#include "evtforge/error.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace evtforge {

namespace {

void check_same_size(const DepthMap& a, const DepthMap& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DomainError("depth maps differ in resolution");
  }
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
}

double residual(double pred, double gt, ResidualMode mode) {
  return mode == ResidualMode::Log ? std::abs(std::log(pred) - std::log(gt)) : std::abs(pred - gt);
}

struct ResidualMap {
  int width = 0;
  int height = 0;
  std::vector<double> value;
  std::vector<std::uint8_t> valid;
  std::size_t valid_count = 0;

  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
};

ResidualMap make_residual(const DepthMap& pred, const DepthMap& gt, ResidualMode mode) {
  check_same_size(pred, gt);
  ResidualMap r;
  r.width = pred.width();
  r.height = pred.height();
  r.value.assign(pred.pixel_count(), 0.0);
  r.valid.assign(pred.pixel_count(), 0);
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) {
    if (pred.valid_at(i) && gt.valid_at(i)) {
      r.value[i] = residual(pred.depth_at(i), gt.depth_at(i), mode);
      r.valid[i] = 1;
      ++r.valid_count;
    }
  }
  return r;
}

double sobel_sum(const ResidualMap& r) {
  double sum = 0.0;
  for (int y = 1; y + 1 < r.height; ++y) {
    for (int x = 1; x + 1 < r.width; ++x) {
      bool ok = true;
      for (int dy = -1; dy <= 1 && ok; ++dy) {
        for (int dx = -1; dx <= 1 && ok; ++dx) ok = r.valid[r.idx(x + dx, y + dy)] != 0;
      }
      if (!ok) continue;
      auto v = [&](int dx, int dy) { return r.value[r.idx(x + dx, y + dy)]; };
      const double gx = (v(1, -1) + 2.0 * v(1, 0) + v(1, 1)) - (v(-1, -1) + 2.0 * v(-1, 0) + v(-1, 1));
      const double gy = (v(-1, 1) + 2.0 * v(0, 1) + v(1, 1)) - (v(-1, -1) + 2.0 * v(0, -1) + v(1, -1));
      sum += std::abs(gx) + std::abs(gy);
    }
  }
  return sum;
}

ResidualMap pool2x2(const ResidualMap& r) {
  ResidualMap out;
  out.width = r.width / 2;
  out.height = r.height / 2;
  out.value.assign(static_cast<std::size_t>(out.width) * out.height, 0.0);
  out.valid.assign(out.value.size(), 0);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const std::size_t a = r.idx(2 * x, 2 * y), b = r.idx(2 * x + 1, 2 * y);
      const std::size_t c = r.idx(2 * x, 2 * y + 1), d = r.idx(2 * x + 1, 2 * y + 1);
      if (r.valid[a] && r.valid[b] && r.valid[c] && r.valid[d]) {
        out.value[out.idx(x, y)] = 0.25 * (r.value[a] + r.value[b] + r.value[c] + r.value[d]);
        out.valid[out.idx(x, y)] = 1;
        ++out.valid_count;
      }
    }
  }
  return out;
}

}  // namespace

double si_loss(const DepthMap& pred, const DepthMap& gt, ResidualMode mode) {
  check_same_size(pred, gt);
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < pred.pixel_count(); ++i) {
    if (!pred.valid_at(i) || !gt.valid_at(i)) continue;
    const double r = residual(pred.depth_at(i), gt.depth_at(i), mode);
    sum += r;
    sum_sq += r * r;
    ++n;
  }
  if (n == 0) throw DomainError("no valid overlap between depth maps");
  const auto nd = static_cast<double>(n);
  // The two terms can differ by round-off when all residuals are equal.
  return std::max(0.0, sum_sq / nd - (sum * sum) / (nd * nd));
}

double grad_loss(const DepthMap& pred, const DepthMap& gt, int scales, ResidualMode mode) {
  if (scales < 1) throw DomainError("grad_loss needs at least one scale");
  ResidualMap r = make_residual(pred, gt, mode);
  const std::size_t n = r.valid_count;
  if (n == 0) throw DomainError("no valid overlap between depth maps");
  double total = 0.0;
  for (int s = 0; s < scales; ++s) {
    if (r.width < 3 || r.height < 3) break;
    total += sobel_sum(r);
    if (s + 1 < scales) r = pool2x2(r);
  }
  return total / static_cast<double>(n);
}

double l1_loss(const DepthMap& a, const DepthMap& b) {
  check_same_size(a, b);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    if (!a.valid_at(i) || !b.valid_at(i)) continue;
    sum += std::abs(a.depth_at(i) - b.depth_at(i));
    ++n;
  }
  if (n == 0) throw DomainError("no valid overlap between depth maps");
  return sum / static_cast<double>(n);
}

LossReport teacher_loss(const DepthMap& pred, const DepthMap& gt, double lambda, int scales,
                        ResidualMode mode) {
  check_lambda(lambda);
  LossReport r;
  r.lambda = lambda;
  r.si = si_loss(pred, gt, mode);
  r.grad = grad_loss(pred, gt, scales, mode);
  r.teacher = r.si + lambda * r.grad;
  return r;
}

LossReport student_loss(double contrast, const DepthMap& d_teacher, const DepthMap& d_student,
                        double lambda) {
  check_lambda(lambda);
  LossReport r;
  r.lambda = lambda;
  r.contrast = contrast;
  r.l1_distill = l1_loss(d_teacher, d_student);
  r.student = contrast + (1.0 - lambda) * r.l1_distill;
  return r;
}

std::string format_report(const LossReport& report) {
  const std::pair<const char*, double> fields[] = {
      {"contrast", report.contrast}, {"grad", report.grad},       {"l1_distill", report.l1_distill},
      {"lambda", report.lambda},     {"si", report.si},           {"student", report.student},
      {"teacher", report.teacher},
  };
  std::string out;
  char buf[64];
  for (const auto& [key, value] : fields) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out += key;
    out += '=';
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace evtforge
