#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "medfaith/run_config.hpp"

namespace medfaith {

/// Outcome of one subcommand. Diagnostics go to the caller's stream; data
/// only goes to the files listed in `outputs`.
struct CommandResult {
  int exit_code = 0;
  std::vector<std::string> errors;
  std::vector<std::filesystem::path> outputs;
};

/// Worker threads for per-instance stages: MEDFAITH_WORKERS, else hardware
/// concurrency.
std::size_t worker_count();

/// Runs `task(i)` for i in [0, n) on a pool of `workers` threads. Results are
/// written by index, so ordering never depends on completion order.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

/// bundles.jsonl + build_sets_stats.json
CommandResult cmd_build_sets(const RunConfig& config, std::ostream& diag);

/// mki.jsonl
CommandResult cmd_build_mki(const RunConfig& config, std::ostream& diag);

struct EvalLossOptions {
  bool gradients = false;
  bool check_fd = false;
  double fd_step = 1e-5;
};

/// losses.jsonl
CommandResult cmd_eval_loss(const RunConfig& config,
                            const EvalLossOptions& options, std::ostream& diag);

/// metrics.json
CommandResult cmd_metrics(const RunConfig& config, std::ostream& diag);

}  // namespace medfaith
