#pragma once

#include "job.hpp"
#include "manifest.hpp"

namespace lanemden::cli {

enum ExitCode { ok = 0, invalid = 1, numerical = 2, verification_failed = 3 };

// Each command writes into `art` and returns ok or verification_failed.
// ValidationError and NumericalError propagate to the caller.
int cmd_constants(const JobConfig& cfg, Artifacts& art);
int cmd_landscape(const JobConfig& cfg, Artifacts& art);
int cmd_minimize(const JobConfig& cfg, Artifacts& art);
int cmd_solve(const JobConfig& cfg, Artifacts& art);
int cmd_continue(const JobConfig& cfg, Artifacts& art);
int cmd_lift(const JobConfig& cfg, Artifacts& art);
int cmd_verify(const JobConfig& cfg, Artifacts& art);

// Checks that need no output directory, run before anything is written.
void precheck(const JobConfig& cfg);

}  // namespace lanemden::cli
