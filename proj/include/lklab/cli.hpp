#pragma once

namespace lklab::cli {

// parses argv, resolves configuration (defaults, then config file, then
// flags), runs the subcommand and writes results/<run-id>/ artifacts.
// Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 invalid
// configuration, 3 compute error or aborted run.
int run(int argc, const char* const* argv);

}  // namespace lklab::cli
