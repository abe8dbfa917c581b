#ifndef ACKF_CLI_COMMANDS_HPP_
#define ACKF_CLI_COMMANDS_HPP_

#include "config.hpp"

namespace ackf::cli {

/// One run per variant; writes <out_dir>/trajectory.csv.
int cmd_simulate(const ExperimentConfig& cfg);

/// Monte-Carlo comparison; writes rmse_per_run.csv and rmse_summary.csv and
/// prints the summary table. Returns 0 iff all requested runs completed.
int cmd_compare(const ExperimentConfig& cfg);

/// Single-run adaptation diagnostics; writes adaptive_diag.csv.
int cmd_diag(const ExperimentConfig& cfg);

}  // namespace ackf::cli

#endif  // ACKF_CLI_COMMANDS_HPP_
