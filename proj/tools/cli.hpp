#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pwf::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2, kSolverFailed = 3 };

/// Runs one command line; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ClaimRow {
  std::string claim;
  std::string quantity;
  std::string expected;  // reference value as printed
  double computed = 0.0;
  double delta = 0.0;  // NaN for inequality and boolean rows
  bool pass = false;
};

inline const std::vector<std::string> kClaims = {"prop3", "example5", "thm4", "prop4", "dhr"};

/// Reference rows for one claim name, or for every claim when name is "all".
std::vector<ClaimRow> reproduce(const std::string& name);

}  // namespace pwf::cli
