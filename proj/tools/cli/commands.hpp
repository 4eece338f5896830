#pragma once

#include <iosfwd>

#include "config.hpp"

namespace dghcli {

enum ExitCode : int { kCompleted = 0, kViolation = 1, kUsageError = 2 };

struct CommandOptions {
  bool corrupt_operator = false;  // negative-control hook for the inequality suite
};

int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_criterion(const RunConfig& config, std::ostream& log);
int cmd_lemmas(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_sweep(const RunConfig& config, std::ostream& log);

}  // namespace dghcli
