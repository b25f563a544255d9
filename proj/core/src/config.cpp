#include "evtforge/config.hpp"

#include "evtforge/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace evtforge {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw DomainError("config key '" + key + "' expects a number, got '" + v + "'");
  }
}

template <typename T>
T to_integer(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw DomainError("config key '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

}  // namespace

SamplerConfig PipelineConfig::sampler() const {
  SamplerConfig s;
  s.contrast_c = sampler_c.value_or(contrast_c);
  s.dt_min = dt_min_us;
  s.dt_max = dt_max_us;
  s.rate_floor = rate_floor;
  return s;
}

void PipelineConfig::validate() const {
  if (!(contrast_c > 0.0)) throw DomainError("contrast_c must be positive");
  sampler().validate();
  if (!(eps_log > 0.0)) throw DomainError("eps_log must be positive");
  if (!(fps > 0.0)) throw DomainError("fps must be positive");
  if (bins < 2) throw DomainError("bins must be at least 2");
  if (window_us == 0) throw DomainError("window_us must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  if (scales < 1) throw DomainError("scales must be at least 1");
  if (threads < 0) throw DomainError("threads must be non-negative");
  if (shards == 0) throw DomainError("shards must be positive");
}

std::string print_config(const PipelineConfig& c) {
  std::ostringstream out;
  out << "bins = " << c.bins << "\n";
  out << "contrast_c = " << fmt_double(c.contrast_c) << "\n";
  out << "dt_max_us = " << c.dt_max_us << "\n";
  out << "dt_min_us = " << c.dt_min_us << "\n";
  out << "eps_log = " << fmt_double(c.eps_log) << "\n";
  out << "fps = " << fmt_double(c.fps) << "\n";
  out << "lambda = " << fmt_double(c.lambda) << "\n";
  out << "rate_floor = " << fmt_double(c.rate_floor) << "\n";
  if (c.sampler_c) out << "sampler_c = " << fmt_double(*c.sampler_c) << "\n";
  out << "scales = " << c.scales << "\n";
  out << "seed = " << c.seed << "\n";
  out << "shards = " << c.shards << "\n";
  out << "threads = " << c.threads << "\n";
  out << "window_us = " << c.window_us << "\n";
  return out.str();
}

PipelineConfig parse_config(const std::string& text, PipelineConfig c) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(lineno) + " is not 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key == "contrast_c") c.contrast_c = to_double(key, value);
    else if (key == "sampler_c") c.sampler_c = to_double(key, value);
    else if (key == "dt_min_us") c.dt_min_us = to_integer<Timestamp>(key, value);
    else if (key == "dt_max_us") c.dt_max_us = to_integer<Timestamp>(key, value);
    else if (key == "rate_floor") c.rate_floor = to_double(key, value);
    else if (key == "eps_log") c.eps_log = to_double(key, value);
    else if (key == "fps") c.fps = to_double(key, value);
    else if (key == "bins") c.bins = to_integer<int>(key, value);
    else if (key == "window_us") c.window_us = to_integer<Timestamp>(key, value);
    else if (key == "lambda") c.lambda = to_double(key, value);
    else if (key == "scales") c.scales = to_integer<int>(key, value);
    else if (key == "threads") c.threads = to_integer<int>(key, value);
    else if (key == "seed") c.seed = to_integer<std::uint64_t>(key, value);
    else if (key == "shards") c.shards = to_integer<std::size_t>(key, value);
    else throw DomainError("unknown config key '" + key + "' on line " + std::to_string(lineno));
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

}  // namespace evtforge
