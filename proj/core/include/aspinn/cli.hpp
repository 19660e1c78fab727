#pragma once

namespace aspinn {

/// Entry point of the `aspinn` command-line tool.
/// Returns 0 on success, 1 on runtime failure and 2 on usage errors.
int cli_main(int argc, char** argv);

}  // namespace aspinn
