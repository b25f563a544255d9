#include "evtforge/generator.hpp"

#include "evtforge/error.hpp"
#include "evtforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace evtforge {

namespace {

constexpr int kRowsPerTile = 16;

// Number of whole thresholds contained in `magnitude`, robust to the
// division rounding either way at exact multiples.
std::uint64_t crossings(double magnitude, double c) {
  auto k = static_cast<std::uint64_t>(std::floor(magnitude / c));
  if (magnitude - static_cast<double>(k + 1) * c >= 0.0) ++k;
  while (k > 0 && magnitude - static_cast<double>(k) * c < 0.0) --k;
  return k;
}

void append_merged(std::vector<Event>& out, std::vector<std::vector<Event>>& tiles) {
  std::size_t total = 0;
  for (const auto& t : tiles) total += t.size();
  const std::size_t start = out.size();
  out.reserve(start + total);

  using Cursor = std::pair<std::size_t, std::size_t>;  // tile, position
  auto greater = [&](const Cursor& a, const Cursor& b) {
    const Event& ea = tiles[a.first][a.second];
    const Event& eb = tiles[b.first][b.second];
    if (event_less(eb, ea)) return true;
    if (event_less(ea, eb)) return false;
    return a.first > b.first;
  };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(greater)> heap(greater);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    if (!tiles[i].empty()) heap.emplace(i, 0);
  }
  while (!heap.empty()) {
    auto [tile, pos] = heap.top();
    heap.pop();
    out.push_back(tiles[tile][pos]);
    if (pos + 1 < tiles[tile].size()) heap.emplace(tile, pos + 1);
  }

  // Events of consecutive intervals can only interleave at the shared
  // boundary timestamp.
  if (start > 0 && start < out.size() && event_less(out[start], out[start - 1])) {
    const auto begin = std::lower_bound(
        out.begin(), out.begin() + static_cast<std::ptrdiff_t>(start), out[start].t,
        [](const Event& e, Timestamp t) { return e.t < t; });
    std::inplace_merge(begin, out.begin() + static_cast<std::ptrdiff_t>(start), out.end(),
                       event_less);
  }
}

}  // namespace

EventGenerator::EventGenerator(const LogFrame& first, double contrast_c, int threads)
    : width_(first.width),
      height_(first.height),
      contrast_c_(contrast_c),
      threads_(threads),
      prev_(first) {
  if (!(contrast_c > 0.0)) throw DomainError("contrast_c must be positive");
  if (width_ <= 0 || height_ <= 0 || width_ > 65535 || height_ > 65535) {
    throw DomainError("frame size must be within 1..65535 pixels per side");
  }
  if (first.log_l.size() != static_cast<std::size_t>(width_) * height_) {
    throw DomainError("log frame buffer does not match its dimensions");
  }
  state_.ref_log = first.log_l;
  state_.ref_t.assign(first.log_l.size(), first.t);
}

void EventGenerator::step_rows(int row_begin, int row_end, const LogFrame& prev,
                               const LogFrame& next, std::vector<Event>& out) {
  const double c = contrast_c_;
  const double span_us = static_cast<double>(next.t - prev.t);
  for (int y = row_begin; y < row_end; ++y) {
    for (int x = 0; x < width_; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
      const double level = next.log_l[i];
      const double delta = level - state_.ref_log[i];
      const std::uint64_t k = crossings(std::abs(delta), c);
      if (k == 0) continue;

      const double s = delta > 0.0 ? 1.0 : -1.0;
      const Polarity p = delta > 0.0 ? Polarity::Positive : Polarity::Negative;
      const double start = prev.log_l[i];
      const double rise = level - start;
      Timestamp last_t = prev.t;
      for (std::uint64_t j = 1; j <= k; ++j) {
        const double crossing = state_.ref_log[i] + static_cast<double>(j) * c * s;
        const double frac = rise != 0.0 ? std::clamp((crossing - start) / rise, 0.0, 1.0) : 1.0;
        last_t = prev.t + static_cast<Timestamp>(std::llround(frac * span_us));
        out.push_back(Event{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                            last_t, p});
      }
      state_.ref_log[i] += static_cast<double>(k) * c * s;
      state_.ref_t[i] = last_t;
    }
  }
}

std::size_t EventGenerator::step(const LogFrame& next, std::vector<Event>& out) {
  if (next.width != width_ || next.height != height_) {
    throw DomainError("frame resolution changed mid-sequence");
  }
  if (next.t <= prev_.t) throw DomainError("frames must have strictly increasing timestamps");

  const auto tiles = static_cast<std::size_t>((height_ + kRowsPerTile - 1) / kRowsPerTile);
  std::vector<std::vector<Event>> tile_events(tiles);
  run_sharded(tiles, threads_, [&](std::size_t tile) {
    const int begin = static_cast<int>(tile) * kRowsPerTile;
    const int end = std::min(height_, begin + kRowsPerTile);
    auto& local = tile_events[tile];
    step_rows(begin, end, prev_, next, local);
    std::sort(local.begin(), local.end(), event_less);
  });

  const std::size_t before = out.size();
  append_merged(out, tile_events);
  prev_ = next;
  return out.size() - before;
}

EventStream generate(std::span<const LogFrame> frames, double contrast_c, int width, int height,
                     int threads) {
  if (!(contrast_c > 0.0)) throw DomainError("contrast_c must be positive");
  if (frames.size() < 2) throw DomainError("generate needs at least 2 frames");
  if (frames.front().width != width || frames.front().height != height) {
    throw DomainError("frame size does not match the requested sensor size");
  }
  EventStream stream;
  stream.width = static_cast<std::uint16_t>(width);
  stream.height = static_cast<std::uint16_t>(height);
  EventGenerator gen(frames.front(), contrast_c, threads);
  for (std::size_t k = 1; k < frames.size(); ++k) gen.step(frames[k], stream.events);
  return stream;
}

std::vector<WindowStats> event_rate_stats(const EventStream& stream, Timestamp window) {
  if (window == 0) throw DomainError("stats window must be positive");
  std::vector<WindowStats> rows;
  if (stream.empty()) return rows;
  const Timestamp origin =
      std::min_element(stream.events.begin(), stream.events.end(),
                       [](const Event& a, const Event& b) { return a.t < b.t; })
          ->t;
  for (const Event& e : stream.events) {
    const std::size_t w = (e.t - origin) / window;
    while (rows.size() <= w) {
      WindowStats row;
      row.t_begin = origin + rows.size() * window;
      rows.push_back(row);
    }
    ++rows[w].total;
    if (e.p == Polarity::Positive) {
      ++rows[w].positive;
    } else {
      ++rows[w].negative;
    }
  }
  for (auto& row : rows) {
    row.balance = row.total ? static_cast<double>(row.positive) / static_cast<double>(row.total) : 0.0;
  }
  return rows;
}

}  // namespace evtforge
