#pragma once

namespace mixflow {

// Entry point behind the mixflow binary: subcommands simulate, stability,
// check, plot. Returns 0 on success, 1 on a runtime failure, 2 on a usage
// error.
int cli_main(int argc, const char* const* argv);

}  // namespace mixflow
