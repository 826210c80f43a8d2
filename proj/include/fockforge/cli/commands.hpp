#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fockforge/cli/config.hpp"
#include "fockforge/cli/records.hpp"

namespace fockforge::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitInternalError = 3,
};

Report cmd_spectrum(const RunConfig& cfg);
Report cmd_verify(const RunConfig& cfg, int jobs);
Report cmd_free_energy(const RunConfig& cfg);
Report cmd_equivalence(const RunConfig& cfg);

// Full command line without the program name, e.g.
// {"verify", "--config", "run.json", "--seed", "7"}. Output goes to --out, the
// config output path, or `out` when neither is set; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fockforge::cli
