#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epx::cli
{

enum ExitCode : int
{
  kOk = 0,
  kUsage = 2,
  kDegenerateFamily = 3,
  kEpProximity = 4,
  kNumericalFailure = 5,
};

// Runs one invocation. `args` excludes the program name. Data files go to the
// --out directory; summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace epx::cli
