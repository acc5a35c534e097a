#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace finlstm {

/// Entry point behind the `finlstm` binary: train / eval / grid / baseline
/// subcommands. Returns the process exit status; failures print one
/// machine-parsable line `error[CODE]: message` to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finlstm
