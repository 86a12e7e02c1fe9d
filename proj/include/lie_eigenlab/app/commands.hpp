#pragma once

#include <ostream>

#include "lie_eigenlab/app/config.hpp"
#include "lie_eigenlab/families.hpp"

namespace lie::app {

enum ExitCode : int { kPass = 0, kCheckFail = 1, kUsageError = 2, kNumericalFailure = 3 };

/// 3 for numerical breakdown (retraction, non-convergence), 2 otherwise.
int exit_code_for(ErrorKind kind);

/// Family named by config.group / config.family with optional generator files.
EigenFamily family_from_config(const RunConfig& config);

void cmd_casimir(const RunConfig& config, Report& report);
void cmd_verify_family(const RunConfig& config, Report& report);
void cmd_verify_morphism(const RunConfig& config, Report& report);
/// Writes CSV or PLY to `artifact` when the format asks for it.
void cmd_sample_manifold(const RunConfig& config, Report& report, std::ostream* artifact);
/// Progress lines, one per criterion, go to `progress` when given.
void cmd_acceptance(const RunConfig& config, Report& report, std::ostream* progress);

/// Validates the config, runs the command, writes outputs and returns the
/// exit code. Errors are reported in the envelope as well.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace lie::app
