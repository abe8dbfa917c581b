#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ackf::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::vector<std::string> split_csv(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_vec(const std::string& key, const std::string& value,
                              std::size_t expected) {
  std::vector<double> out;
  for (const std::string& item : split_csv(value)) {
    out.push_back(parse_double(key, item));
  }
  if (out.size() != expected) {
    throw ConfigError(key + ": expected " + std::to_string(expected) +
                      " comma-separated values");
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vec(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
  if (key == "scenario.ts") cfg.ts = parse_double(key, value);
  else if (key == "scenario.kx") cfg.kx = parse_double(key, value);
  else if (key == "scenario.ky") cfg.ky = parse_double(key, value);
  else if (key == "scenario.g") cfg.g = parse_double(key, value);
  else if (key == "scenario.sx") cfg.sx = parse_double(key, value);
  else if (key == "scenario.sy") cfg.sy = parse_double(key, value);
  else if (key == "scenario.steps") cfg.steps = static_cast<int>(parse_int(key, value));
  else if (key == "scenario.x0") cfg.x0 = parse_vec(key, value, 4);
  else if (key == "noise.q_scale") cfg.q_scale = parse_double(key, value);
  else if (key == "noise.range_std") cfg.range_std = parse_double(key, value);
  else if (key == "noise.bearing_std_deg") cfg.bearing_std_deg = parse_double(key, value);
  else if (key == "noise.r_mismatch") cfg.r_mismatch = parse_double(key, value);
  else if (key == "outlier.probability") cfg.outlier_probability = parse_double(key, value);
  else if (key == "outlier.magnitude") cfg.outlier_magnitude = parse_double(key, value);
  else if (key == "outlier.mode") cfg.outlier_mode = value;
  else if (key == "maneuver.probability") cfg.maneuver_probability = parse_double(key, value);
  else if (key == "maneuver.kick") cfg.maneuver_kick = parse_double(key, value);
  else if (key == "adaptive.window") cfg.window = static_cast<int>(parse_int(key, value));
  else if (key == "adaptive.r_floor") cfg.r_floor = parse_double(key, value);
  else if (key == "adaptive.q_floor") cfg.q_floor = parse_double(key, value);
  else if (key == "adaptive.adapt_q") cfg.adapt_q = parse_bool(key, value);
  else if (key == "adaptive.variance_mode") cfg.variance_mode = value;
  else if (key == "init.p0_diag") cfg.p0_diag = parse_vec(key, value, 4);
  else if (key == "run.runs") cfg.runs = static_cast<int>(parse_int(key, value));
  else if (key == "run.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "run.variants") cfg.variants = split_csv(value);
  else if (key == "run.out_dir") cfg.out_dir = value;
  else throw ConfigError("unknown configuration key: " + key);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (ts <= 0) throw ConfigError("scenario.ts: must be > 0");
  if (steps < 1) throw ConfigError("scenario.steps: must be >= 1");
  if (q_scale < 0) throw ConfigError("noise.q_scale: must be >= 0");
  if (range_std <= 0) throw ConfigError("noise.range_std: must be > 0");
  if (bearing_std_deg <= 0) throw ConfigError("noise.bearing_std_deg: must be > 0");
  if (r_mismatch <= 0) throw ConfigError("noise.r_mismatch: must be > 0");
  if (outlier_probability < 0 || outlier_probability >= 1)
    throw ConfigError("outlier.probability: must be in [0, 1)");
  if (outlier_magnitude < 1) throw ConfigError("outlier.magnitude: must be >= 1");
  if (outlier_mode != "additive_spike" && outlier_mode != "variance_inflation")
    throw ConfigError("outlier.mode: must be additive_spike or variance_inflation");
  if (maneuver_probability < 0 || maneuver_probability >= 1)
    throw ConfigError("maneuver.probability: must be in [0, 1)");
  if (maneuver_kick < 0) throw ConfigError("maneuver.kick: must be >= 0");
  if (window < 2) throw ConfigError("adaptive.window: must be >= 2");
  if (r_floor <= 0) throw ConfigError("adaptive.r_floor: must be > 0");
  if (q_floor <= 0) throw ConfigError("adaptive.q_floor: must be > 0");
  if (variance_mode != "paper" && variance_mode != "normalized")
    throw ConfigError("adaptive.variance_mode: must be paper or normalized");
  for (double p : p0_diag) {
    if (p <= 0) throw ConfigError("init.p0_diag: entries must be > 0");
  }
  if (runs < 1) throw ConfigError("run.runs: must be >= 1");
  if (variants.empty()) throw ConfigError("run.variants: must be nonempty");
  for (const std::string& v : variants) {
    if (v != "ckf" && v != "ackf" && v != "cmrackf")
      throw ConfigError("run.variants: unknown variant '" + v + "'");
  }
}

ExperimentSetup to_setup_impl(const ExperimentConfig& c) {
  TargetScenario sc;
  sc.Ts = c.ts;
  sc.kx = c.kx;
  sc.ky = c.ky;
  sc.g = c.g;
  sc.sx = c.sx;
  sc.sy = c.sy;
  sc.steps = c.steps;
  sc.x0 = Eigen::Map<const Vec>(c.x0.data(), 4);

  const double bearing_std = c.bearing_std_deg * M_PI / 180.0;
  Mat true_r(2, 2);
  true_r << c.range_std * c.range_std, 0.0, 0.0, bearing_std * bearing_std;
  const Mat true_q = c.q_scale * Mat::Identity(4, 4);

  OutlierModel outliers;
  outliers.probability = c.outlier_probability;
  outliers.magnitude = c.outlier_magnitude;
  outliers.mode = c.outlier_mode == "variance_inflation"
                      ? OutlierMode::variance_inflation
                      : OutlierMode::additive_spike;

  ManeuverModel maneuvers;
  maneuvers.probability = c.maneuver_probability;
  maneuvers.kick = c.maneuver_kick;

  AdaptiveConfig ad;
  ad.window_size = c.window;
  ad.r_floor = c.r_floor;
  ad.q_floor = c.q_floor;
  ad.adapt_q = c.adapt_q;
  ad.variance_mode = c.variance_mode == "normalized"
                         ? VarianceMode::normalized
                         : VarianceMode::paper_literal;

  Mat p0 = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) p0(i, i) = c.p0_diag[i];

  return ExperimentSetup{
      sc,
      SpdMat(true_q),
      SpdMat(true_r),
      NoiseSpec{SpdMat(true_q), SpdMat(c.r_mismatch * true_r)},
      outliers,
      maneuvers,
      ad,
      CkfOptions{},
      p0,
  };
}

ExperimentSetup ExperimentConfig::to_setup() const {
  validate();
  return to_setup_impl(*this);
}

std::vector<FilterVariant> ExperimentConfig::variant_list() const {
  std::vector<FilterVariant> out;
  for (const std::string& v : variants) {
    out.push_back(variant_from_name(v));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved()
    const {
  std::string variants_csv;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (i) variants_csv += ",";
    variants_csv += variants[i];
  }
  return {
      {"scenario.ts", fmt(ts)},
      {"scenario.kx", fmt(kx)},
      {"scenario.ky", fmt(ky)},
      {"scenario.g", fmt(g)},
      {"scenario.sx", fmt(sx)},
      {"scenario.sy", fmt(sy)},
      {"scenario.steps", std::to_string(steps)},
      {"scenario.x0", fmt_vec(x0)},
      {"noise.q_scale", fmt(q_scale)},
      {"noise.range_std", fmt(range_std)},
      {"noise.bearing_std_deg", fmt(bearing_std_deg)},
      {"noise.r_mismatch", fmt(r_mismatch)},
      {"outlier.probability", fmt(outlier_probability)},
      {"outlier.magnitude", fmt(outlier_magnitude)},
      {"outlier.mode", outlier_mode},
      {"maneuver.probability", fmt(maneuver_probability)},
      {"maneuver.kick", fmt(maneuver_kick)},
      {"adaptive.window", std::to_string(window)},
      {"adaptive.r_floor", fmt(r_floor)},
      {"adaptive.q_floor", fmt(q_floor)},
      {"adaptive.adapt_q", adapt_q ? "true" : "false"},
      {"adaptive.variance_mode", variance_mode},
      {"init.p0_diag", fmt_vec(p0_diag)},
      {"run.runs", std::to_string(runs)},
      {"run.seed", std::to_string(seed)},
      {"run.variants", variants_csv},
      {"run.out_dir", out_dir},
  };
}

}  // namespace ackf::cli
