#pragma once

#include "evtforge/ingest.hpp"
#include "evtforge/types.hpp"

#include <span>
#include <vector>

namespace evtforge {

/// Per-pixel reference state of the threshold ladder.
struct PixelState {
  std::vector<double> ref_log;    // log level at the last crossing
  std::vector<Timestamp> ref_t;   // time of the last crossing
};

/// Incremental event generator. Feed log frames in time order; each call to
/// step() appends the events triggered between the previous frame and the
/// new one. Output is globally ordered by (t, y, x, p) across calls.
class EventGenerator {
 public:
  EventGenerator(const LogFrame& first, double contrast_c, int threads = 1);

  /// Processes the interval (previous frame, next]. Returns the number of
  /// events appended to `out`.
  std::size_t step(const LogFrame& next, std::vector<Event>& out);

  const PixelState& state() const { return state_; }
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  void step_rows(int row_begin, int row_end, const LogFrame& prev, const LogFrame& next,
                 std::vector<Event>& out);

  int width_;
  int height_;
  double contrast_c_;
  int threads_;
  PixelState state_;
  LogFrame prev_;
};

/// Runs the threshold ladder over consecutive frames: each pixel emits
/// floor(|L - ref| / C) events per interval, timestamps are placed by
/// linear interpolation of log intensity, and the reference advances by
/// whole multiples of C. The result is independent of `threads`.
EventStream generate(std::span<const LogFrame> frames, double contrast_c, int width, int height,
                     int threads = 1);

struct WindowStats {
  Timestamp t_begin = 0;
  std::uint64_t total = 0;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  /// positive / total; 0 for an empty window.
  double balance = 0.0;
};

/// Counts per non-overlapping window starting at the first event. Empty
/// windows between events are reported with zero counts.
std::vector<WindowStats> event_rate_stats(const EventStream& stream, Timestamp window);

}  // namespace evtforge
