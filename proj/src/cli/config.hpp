#ifndef ACKF_CLI_CONFIG_HPP_
#define ACKF_CLI_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ackf/harness.hpp"

namespace ackf::cli {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat experiment configuration, parsed from `section.key = value` lines
/// and overridable by command-line flags (flag wins).
struct ExperimentConfig {
  // scenario
  double ts = 0.1;
  double kx = 0.01;
  double ky = 0.01;
  double g = 9.81;
  double sx = -100.0;
  double sy = 300.0;
  int steps = 400;
  std::vector<double> x0 = {0.0, 0.0, -31.3, 0.0};

  // noise
  double q_scale = 0.01;        // true process noise, q_scale * I
  double range_std = 5.0;       // m
  double bearing_std_deg = 0.5; // degrees
  double r_mismatch = 0.1;      // filter nominal R = r_mismatch * true R

  // outliers
  double outlier_probability = 0.1;
  double outlier_magnitude = 10.0;
  std::string outlier_mode = "additive_spike";

  // maneuvers (off by default; thrust bursts in the truth when enabled)
  double maneuver_probability = 0.0;
  double maneuver_kick = 10.0;  // m/s

  // adaptive
  int window = 30;
  double r_floor = 1e-9;
  double q_floor = 1e-9;
  bool adapt_q = false;
  std::string variance_mode = "paper";

  // init
  std::vector<double> p0_diag = {100.0, 100.0, 10.0, 10.0};

  // run
  int runs = 50;
  std::uint64_t seed = 1;
  std::vector<std::string> variants = {"ckf", "ackf", "cmrackf"};
  std::string out_dir = "out";

  void validate() const;  // throws ConfigError naming key and constraint
  ExperimentSetup to_setup() const;
  std::vector<FilterVariant> variant_list() const;

  /// Resolved key=value view, in stable order, for output file headers.
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

ExperimentConfig parse_config_file(const std::string& path);
void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value);

}  // namespace ackf::cli

#endif  // ACKF_CLI_CONFIG_HPP_
