#include "commands.hpp"

#include "evtforge/cm_optimizer.hpp"
#include "evtforge/config.hpp"
#include "evtforge/error.hpp"
#include "evtforge/evtio.hpp"
#include "evtforge/generator.hpp"
#include "evtforge/geometry.hpp"
#include "evtforge/ingest.hpp"
#include "evtforge/losses.hpp"
#include "evtforge/sampler.hpp"
#include "evtforge/scene.hpp"
#include "evtforge/volume.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace evtforge::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kThreadsEnv = "EVTFORGE_THREADS";

// Values of the pipeline-wide flags, copied over the config file when given.
struct GlobalFlags {
  PipelineConfig defaults;
  std::string config_file;
  CLI::Option* config_opt = nullptr;

  double contrast_c = defaults.contrast_c;
  Timestamp dt_min_us = defaults.dt_min_us;
  Timestamp dt_max_us = defaults.dt_max_us;
  int bins = defaults.bins;
  Timestamp window_us = defaults.window_us;
  double lambda = defaults.lambda;
  int scales = defaults.scales;
  int threads = defaults.threads;
  std::uint64_t seed = defaults.seed;

  CLI::Option* contrast_opt = nullptr;
  CLI::Option* dt_min_opt = nullptr;
  CLI::Option* dt_max_opt = nullptr;
  CLI::Option* bins_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* scales_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void add_to(CLI::App& app) {
    config_opt = app.add_option("--config", config_file, "key = value config file (flags override it)");
    contrast_opt = app.add_option("--contrast-c", contrast_c, "Contrast threshold C in log units")
                       ->capture_default_str();
    dt_min_opt = app.add_option("--dt-min-us", dt_min_us, "Minimum adaptive sampling step (us)")
                     ->capture_default_str();
    dt_max_opt = app.add_option("--dt-max-us", dt_max_us,
                                "Maximum adaptive sampling step (us); 0 = two source-frame intervals")
                     ->capture_default_str();
    bins_opt = app.add_option("--bins", bins, "Temporal bins per event volume")->capture_default_str();
    window_opt = app.add_option("--window-us", window_us, "Event window length (us)")
                     ->capture_default_str();
    lambda_opt = app.add_option("--lambda", lambda, "Teacher/student loss weight")->capture_default_str();
    scales_opt = app.add_option("--scales", scales, "Scales of the gradient-matching loss")
                     ->capture_default_str();
    threads_opt = app.add_option("--threads", threads,
                                 "Worker threads; 0 = hardware concurrency (env EVTFORGE_THREADS)")
                      ->capture_default_str();
    seed_opt = app.add_option("--seed", seed, "Seed for synthetic fixtures")->capture_default_str();
  }

  // Defaults, then the config file, then EVTFORGE_THREADS, then explicit flags.
  PipelineConfig resolve() const {
    PipelineConfig c = defaults;
    if (config_opt->count() > 0) c = load_config(config_file, c);
    if (const char* env = std::getenv(kThreadsEnv); env && *env) {
      c = parse_config(std::string("threads = ") + env, c);
    }
    if (contrast_opt->count()) c.contrast_c = contrast_c;
    if (dt_min_opt->count()) c.dt_min_us = dt_min_us;
    if (dt_max_opt->count()) c.dt_max_us = dt_max_us;
    if (bins_opt->count()) c.bins = bins;
    if (window_opt->count()) c.window_us = window_us;
    if (lambda_opt->count()) c.lambda = lambda;
    if (scales_opt->count()) c.scales = scales;
    if (threads_opt->count()) c.threads = threads;
    if (seed_opt->count()) c.seed = seed;
    c.validate();
    return c;
  }
};

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  if (values.size() != expected) {
    throw DomainError(std::string(what) + " expects " + std::to_string(expected) + " values");
  }
  return values;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  AtomicFile out(path);
  out.write(std::span<const char>(text.data(), text.size()));
  out.commit();
}

// Camera flags shared by warp and optimize.
struct CameraFlags {
  double fx = 0.0, fy = 0.0;
  std::optional<double> cx, cy;

  void add_to(CLI::App& app) {
    app.add_option("--fx", fx, "Focal length x (pixels)")->required();
    app.add_option("--fy", fy, "Focal length y (pixels)")->required();
    app.add_option("--cx", cx, "Principal point x (default: image centre)");
    app.add_option("--cy", cy, "Principal point y (default: image centre)");
  }

  CameraModel build(const EventStream& s) const {
    return CameraModel(fx, fy, cx.value_or((s.width - 1) / 2.0), cy.value_or((s.height - 1) / 2.0));
  }
};

// Window selection shared by volumize, warp and optimize. The window is
// [t_start, t_start + window_us], inclusive of its right edge.
struct WindowFlags {
  std::optional<Timestamp> t_start;

  void add_to(CLI::App& app) {
    app.add_option("--t-start", t_start, "Window start (us); default: first event");
  }

  std::pair<Timestamp, Timestamp> resolve(const fs::path& file, Timestamp window) const {
    Timestamp t0 = 0;
    if (t_start) {
      t0 = *t_start;
    } else {
      EventReader reader(file);
      if (reader.size() > 0) t0 = reader.timestamp_at(0);
    }
    return {t0, t0 + window};
  }
};

EventStream read_window(const fs::path& file, Timestamp t0, Timestamp t1) {
  return read_stream(file, TimeWindow{t0, t1 + 1});
}

std::optional<DepthMap> depth_source(const std::string& depth_file,
                                     const std::optional<double>& depth0) {
  if (!depth_file.empty() && depth0) throw DomainError("give either --depth or --depth0, not both");
  if (!depth_file.empty()) return read_depth_map(depth_file);
  if (!depth0) throw DomainError("a depth source is required (--depth or --depth0)");
  return std::nullopt;
}

// --- subcommands ------------------------------------------------------

struct GenerateCmd {
  std::string frames_dir;
  std::string out_file;
  double fps = 30.0;
  double eps_log = kDefaultEpsLog;

  int run(const PipelineConfig& c, std::ostream& out) const {
    const std::vector<Frame> frames = load_sequence(frames_dir, fps, c.threads);
    std::vector<LogFrame> logs;
    logs.reserve(frames.size());
    for (const Frame& f : frames) logs.push_back(to_log(f, eps_log));
    if (logs.size() < 2) throw DomainError("need at least 2 frames to generate events");

    const SamplePlan plan = build_plan(logs, c.sampler(), c.threads);
    EventGenerator gen(interpolate_log_frame(logs, plan.times.front()), c.contrast_c, c.threads);
    EventWriter writer(out_file, static_cast<std::uint16_t>(logs.front().width),
                       static_cast<std::uint16_t>(logs.front().height));
    std::vector<Event> batch;
    Timestamp first_t = 0, last_t = 0;
    std::uint64_t count = 0;
    for (std::size_t k = 1; k < plan.times.size(); ++k) {
      batch.clear();
      gen.step(interpolate_log_frame(logs, plan.times[k]), batch);
      if (batch.empty()) continue;
      if (count == 0) first_t = batch.front().t;
      last_t = batch.back().t;
      count += batch.size();
      writer.append(batch);
    }
    const std::uint64_t bytes = writer.finish();
    const Timestamp duration = plan.times.back() - plan.times.front();
    out << "events=" << count << "\n";
    out << "plan_frames=" << plan.times.size() << "\n";
    out << "duration_us=" << duration << "\n";
    out << "events_per_second="
        << fmt(duration > 0 ? static_cast<double>(count) * kMicrosPerSecond / static_cast<double>(duration) : 0.0)
        << "\n";
    out << "first_event_us=" << first_t << "\nlast_event_us=" << last_t << "\n";
    out << "bytes=" << bytes << "\n";
    return kOk;
  }
};

struct VolumizeCmd {
  std::string in_file;
  std::string out_file;
  WindowFlags window;

  int run(const PipelineConfig& c, std::ostream& out) const {
    const auto [t0, t1] = window.resolve(in_file, c.window_us);
    const EventStream stream = read_window(in_file, t0, t1);
    const EventVolume vol = build_volume(stream, t0, t1, c.bins, {c.shards, c.threads});
    write_volume(out_file, vol);
    out << "events=" << stream.size() << "\n";
    out << "t_start=" << t0 << "\nt_end=" << t1 << "\n";
    out << "bins=" << vol.bins << "\n";
    out << "sum=" << fmt(vol.sum()) << "\n";
    return kOk;
  }
};

struct WarpCmd {
  std::string in_file;
  std::string out_file;
  std::string pgm_file;
  std::string depth_file;
  std::optional<double> depth0;
  std::string pose = "0,0,0,0,0,0";
  CameraFlags camera;
  WindowFlags window;

  int run(const PipelineConfig& c, std::ostream& out) const {
    const auto [t0, t1] = window.resolve(in_file, c.window_us);
    const EventStream stream = read_window(in_file, t0, t1);
    const ContrastObjective objective(stream, camera.build(stream), t0, t1,
                                      depth_source(depth_file, depth0), {kMinProjectionDepth, c.shards, c.threads});
    MotionHypothesis h;
    const auto p = parse_list(pose, 6, "--pose");
    std::copy(p.begin(), p.end(), h.motion.begin());
    h.depth0 = depth0;
    const WarpedEventImage iwe = objective.image(h);
    write_iwe(out_file, iwe, t0, t1);
    if (!pgm_file.empty()) write_iwe_pgm(pgm_file, iwe);
    out << "reference_events=" << objective.reference_events() << "\n";
    out << "warped_events=" << objective.moving_events() << "\n";
    out << "dropped_events=" << objective.dropped_events() << "\n";
    out << "contrast=" << fmt(contrast_loss(iwe)) << "\n";
    out << "contrast_unwarped=" << fmt(contrast_loss(objective.plain_image())) << "\n";
    return kOk;
  }
};

struct OptimizeCmd {
  std::string in_file;
  std::string out_file;
  std::string depth_file;
  std::optional<double> depth0;
  std::string params = "tx";
  std::string init = "0,0,0,0,0,0";
  int budget = OptimizerOptions{}.budget;
  int sweeps = OptimizerOptions{}.sweeps;
  CameraFlags camera;
  WindowFlags window;

  int run(const PipelineConfig& c, std::ostream& out) const {
    const auto [t0, t1] = window.resolve(in_file, c.window_us);
    const EventStream stream = read_window(in_file, t0, t1);
    const ContrastObjective objective(stream, camera.build(stream), t0, t1,
                                      depth_source(depth_file, depth0), {kMinProjectionDepth, c.shards, c.threads});
    MotionHypothesis h;
    const auto p = parse_list(init, 6, "--init");
    std::copy(p.begin(), p.end(), h.motion.begin());
    h.depth0 = depth0;
    OptimizerOptions opts;
    opts.mask = parse_param_mask(params);
    opts.budget = budget;
    opts.sweeps = sweeps;
    const OptimizeResult r = optimize_motion(objective, h, opts);
    write_text(out_file, format_trace_csv(r.trace));
    for (int k = 0; k < kMotionParams; ++k) {
      if (!opts.mask.test(static_cast<std::size_t>(k))) continue;
      out << param_name(static_cast<MotionParam>(k)) << "="
          << fmt(r.best.get(static_cast<MotionParam>(k))) << "\n";
    }
    out << "initial_loss=" << fmt(r.initial_loss) << "\n";
    out << "final_loss=" << fmt(r.loss) << "\n";
    out << "evaluations=" << r.evaluations << "\n";
    return kOk;
  }
};

struct StatsCmd {
  std::string in_file;
  std::string out_file;
  std::optional<Timestamp> stats_window;

  int run(const PipelineConfig& c, std::ostream& out) const {
    const EventStream stream = read_stream(in_file);
    const EvtFileHeader header = read_header(in_file);
    const auto rows = event_rate_stats(stream, stats_window.value_or(c.window_us));
    std::string csv = "t_begin_us,total,positive,negative,balance\n";
    std::uint64_t total = 0, positive = 0;
    for (const auto& r : rows) {
      csv += std::to_string(r.t_begin) + "," + std::to_string(r.total) + "," +
             std::to_string(r.positive) + "," + std::to_string(r.negative) + "," + fmt(r.balance) + "\n";
      total += r.total;
      positive += r.positive;
    }
    if (!out_file.empty()) {
      write_text(out_file, csv);
    } else {
      out << csv;
    }
    out << "windows=" << rows.size() << "\n";
    out << "total=" << total << "\n";
    out << "header_count=" << header.event_count << "\n";
    out << "positive=" << positive << "\nnegative=" << total - positive << "\n";
    if (total != header.event_count) throw DomainError("window totals disagree with the header count");
    return kOk;
  }
};

struct LossesCmd {
  std::string teacher_file;
  std::string gt_file;
  std::string student_file;
  std::string out_file;
  double contrast = 0.0;
  bool log_residual = false;

  int run(const PipelineConfig& c, std::ostream& out) const {
    const DepthMap teacher = read_depth_map(teacher_file);
    const DepthMap gt = read_depth_map(gt_file);
    const DepthMap student = student_file.empty() ? teacher : read_depth_map(student_file);
    const ResidualMode mode = log_residual ? ResidualMode::Log : ResidualMode::Linear;
    LossReport r = teacher_loss(teacher, gt, c.lambda, c.scales, mode);
    const LossReport s = student_loss(contrast, teacher, student, c.lambda);
    r.contrast = s.contrast;
    r.l1_distill = s.l1_distill;
    r.student = s.student;
    const std::string text = format_report(r);
    if (!out_file.empty()) write_text(out_file, text);
    out << text;
    return kOk;
  }
};

struct ManifestCmd {
  std::vector<std::string> files;
  std::vector<std::string> categories;
  std::string out_file;

  int run(const PipelineConfig&, std::ostream& out) const {
    std::vector<fs::path> paths(files.begin(), files.end());
    const Manifest m = build_manifest(paths, categories);
    const std::string text = format_manifest(m);
    if (!out_file.empty()) {
      write_text(out_file, text);
    } else {
      out << text;
    }
    return m.failed() == 0 ? kOk : kUsageError;
  }
};

struct SynthFramesCmd {
  std::string out_dir;
  int frames = 10;
  int width = 64;
  int height = 48;
  std::string motion = "edge";
  double speed = 1.5;  // pixels per frame

  int run(const PipelineConfig& c, std::ostream& out) const {
    if (motion != "edge" && motion != "static") throw DomainError("--motion must be edge or static");
    if (frames < 2 || width < 2 || height < 2) throw DomainError("fixture needs >= 2 frames of >= 2x2");
    fs::create_directories(out_dir);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double dark = 0.1 + 0.1 * unit(rng);
    const double bright = 0.7 + 0.2 * unit(rng);
    const double start = width * (0.2 + 0.2 * unit(rng));
    for (int k = 0; k < frames; ++k) {
      Frame f{width, height, std::vector<double>(static_cast<std::size_t>(width) * height), 0};
      const double edge = start + (motion == "edge" ? speed * k : 0.0);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          // Soft vertical edge: bright to the left of `edge`.
          const double s = 1.0 / (1.0 + std::exp((x - edge) / 0.75));
          f.intensity[static_cast<std::size_t>(y) * width + x] = dark + (bright - dark) * s;
        }
      }
      char name[32];
      std::snprintf(name, sizeof name, "frame_%05d.pgm", k);
      write_pgm(fs::path(out_dir) / name, f, true);
    }
    out << "frames=" << frames << "\n";
    return kOk;
  }
};

struct SynthSceneCmd {
  std::string out_file;
  std::string depth_out;
  std::string poses_out;
  int segments = SceneFixtureOptions{}.segments;
  double speed = SceneFixtureOptions{}.speed_x;
  double depth = SceneFixtureOptions{}.plane_depth;

  int run(const PipelineConfig& c, std::ostream& out) const {
    SceneFixtureOptions fo;
    fo.segments = segments;
    fo.speed_x = speed;
    fo.plane_depth = depth;
    SyntheticScene scene = random_translating_scene(c.seed, fo);
    scene.duration = c.window_us;
    RenderOptions ro;
    ro.window = c.window_us;
    ro.eps_log = kDefaultEpsLog;
    ro.threads = c.threads;
    const RenderedScene r = render_scene_events(scene, c.sampler(), ro);
    write_stream(r.stream, out_file);
    if (!depth_out.empty()) write_depth_map(depth_out, r.depth);
    if (!poses_out.empty()) {
      std::string text = "# t_us tx ty tz (camera-to-world translation; rotation is identity)\n";
      for (const auto& p : r.poses) {
        const auto& t = p.camera_to_world.translation();
        text += std::to_string(p.t) + " " + fmt(t.x()) + " " + fmt(t.y()) + " " + fmt(t.z()) + "\n";
      }
      write_text(poses_out, text);
    }
    const RigidPose half = relative_pose(scene, 0, c.window_us / 2);
    out << "events=" << r.stream.size() << "\n";
    out << "fx=" << fmt(scene.camera.fx()) << "\nfy=" << fmt(scene.camera.fy()) << "\n";
    out << "cx=" << fmt(scene.camera.cx()) << "\ncy=" << fmt(scene.camera.cy()) << "\n";
    out << "depth0=" << fmt(scene.plane_depth) << "\n";
    out << "true_tx_half_window=" << fmt(half.translation().x()) << "\n";
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"evtforge: frame-to-event synthesis and contrast-maximization toolkit", "evtforge"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags global;
  global.add_to(app);

  GenerateCmd gen;
  auto* sc_gen = app.add_subcommand("generate", "Frames directory -> EVTS event file");
  sc_gen->add_option("frames_dir", gen.frames_dir, "Directory of .pgm/.png frames")->required();
  sc_gen->add_option("-o,--out", gen.out_file, "Output .evts file")->required();
  sc_gen->add_option("--fps", gen.fps, "Frame rate used when no timestamps.txt exists")->capture_default_str();
  sc_gen->add_option("--eps-log", gen.eps_log, "Offset inside ln(I + eps)")->capture_default_str();

  VolumizeCmd vol;
  auto* sc_vol = app.add_subcommand("volumize", "EVTS window -> EVOL event volume");
  sc_vol->add_option("input", vol.in_file, "Input .evts file")->required();
  sc_vol->add_option("-o,--out", vol.out_file, "Output .evol file")->required();
  vol.window.add_to(*sc_vol);

  WarpCmd warp;
  auto* sc_warp = app.add_subcommand("warp", "Two-half rigid warp of a window -> EIWE image");
  sc_warp->add_option("input", warp.in_file, "Input .evts file")->required();
  sc_warp->add_option("-o,--out", warp.out_file, "Output .eiwe file")->required();
  sc_warp->add_option("--pgm", warp.pgm_file, "Also write an 8-bit PGM render");
  sc_warp->add_option("--depth", warp.depth_file, "EDPT depth map of the window");
  sc_warp->add_option("--depth0", warp.depth0, "Constant scene depth (m)");
  sc_warp->add_option("--pose", warp.pose, "tx,ty,tz,rx,ry,rz")->capture_default_str();
  warp.camera.add_to(*sc_warp);
  warp.window.add_to(*sc_warp);

  OptimizeCmd opt;
  auto* sc_opt = app.add_subcommand("optimize", "Recover motion by contrast maximization");
  sc_opt->add_option("input", opt.in_file, "Input .evts file")->required();
  sc_opt->add_option("-o,--out", opt.out_file, "Output trace CSV")->required();
  sc_opt->add_option("--depth", opt.depth_file, "EDPT depth map of the window");
  sc_opt->add_option("--depth0", opt.depth0, "Constant scene depth (m); optimizable as 'depth0'");
  sc_opt->add_option("--params", opt.params, "Enabled parameters: tx,ty,tz,rx,ry,rz,depth0")->capture_default_str();
  sc_opt->add_option("--init", opt.init, "Initial tx,ty,tz,rx,ry,rz")->capture_default_str();
  sc_opt->add_option("--budget", opt.budget, "Objective evaluations")->capture_default_str();
  sc_opt->add_option("--sweeps", opt.sweeps, "Coordinate sweeps")->capture_default_str();
  opt.camera.add_to(*sc_opt);
  opt.window.add_to(*sc_opt);

  StatsCmd stats;
  auto* sc_stats = app.add_subcommand("stats", "Per-window event counts and polarity balance");
  sc_stats->add_option("input", stats.in_file, "Input .evts file")->required();
  sc_stats->add_option("-o,--out", stats.out_file, "Write the CSV here instead of stdout");
  sc_stats->add_option("--stats-window-us", stats.stats_window, "Window length (default: --window-us)");

  LossesCmd losses;
  auto* sc_loss = app.add_subcommand("losses", "Depth losses between EDPT depth maps");
  sc_loss->add_option("--teacher", losses.teacher_file, "Teacher (supervised) prediction")->required();
  sc_loss->add_option("--gt", losses.gt_file, "Ground truth depth")->required();
  sc_loss->add_option("--student", losses.student_file, "Student prediction (default: teacher)");
  sc_loss->add_option("--contrast", losses.contrast, "Contrast loss passed through to the student loss")
      ->capture_default_str();
  sc_loss->add_flag("--log-residual", losses.log_residual, "Use |ln pred - ln gt| residuals");
  sc_loss->add_option("-o,--out", losses.out_file, "Also write the report to this file");

  ManifestCmd manifest;
  auto* sc_man = app.add_subcommand("manifest", "Dataset manifest over EVTS files");
  sc_man->add_option("files", manifest.files, "EVTS files")->required();
  sc_man->add_option("--category", manifest.categories,
                     "One tag per file: hiking, driving, flying, underwater, indoor");
  sc_man->add_option("-o,--out", manifest.out_file, "Write the manifest here instead of stdout");

  SynthFramesCmd synth;
  auto* sc_synth = app.add_subcommand("synth-frames", "Write a moving-edge or static PGM fixture");
  sc_synth->add_option("out_dir", synth.out_dir, "Output directory")->required();
  sc_synth->add_option("--frames", synth.frames, "Frame count")->capture_default_str();
  sc_synth->add_option("--width", synth.width, "Width")->capture_default_str();
  sc_synth->add_option("--height", synth.height, "Height")->capture_default_str();
  sc_synth->add_option("--motion", synth.motion, "edge or static")->capture_default_str();
  sc_synth->add_option("--speed", synth.speed, "Edge speed (pixels/frame)")->capture_default_str();

  SynthSceneCmd scene;
  auto* sc_scene = app.add_subcommand("synth-scene", "Render events of a translating textured plane");
  sc_scene->add_option("-o,--out", scene.out_file, "Output .evts file")->required();
  sc_scene->add_option("--depth-out", scene.depth_out, "Ground-truth EDPT depth at t = 0");
  sc_scene->add_option("--poses-out", scene.poses_out, "Ground-truth poses at window boundaries");
  sc_scene->add_option("--segments", scene.segments, "Strokes on the plane")->capture_default_str();
  sc_scene->add_option("--speed", scene.speed, "Camera speed along x (m/s)")->capture_default_str();
  sc_scene->add_option("--plane-depth", scene.depth, "Plane depth (m)")->capture_default_str();

  auto* sc_cfg = app.add_subcommand("print-config", "Print the effective configuration");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    const PipelineConfig config = global.resolve();
    if (sc_gen->parsed()) return gen.run(config, out);
    if (sc_vol->parsed()) return vol.run(config, out);
    if (sc_warp->parsed()) return warp.run(config, out);
    if (sc_opt->parsed()) return opt.run(config, out);
    if (sc_stats->parsed()) return stats.run(config, out);
    if (sc_loss->parsed()) return losses.run(config, out);
    if (sc_man->parsed()) return manifest.run(config, out);
    if (sc_synth->parsed()) return synth.run(config, out);
    if (sc_scene->parsed()) return scene.run(config, out);
    if (sc_cfg->parsed()) {
      out << print_config(config);
      return kOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace evtforge::cli
