#pragma once

#include <ostream>

namespace soldefect
{

/// Exit codes shared by every subcommand.
enum ExitCode : int
{
	exit_clean = 0,
	exit_findings = 1,
	exit_usage = 2,
	exit_io = 3
};

/// Entry point of the `soldefect` command. Output goes to `out`, diagnostics to `err`.
int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}
