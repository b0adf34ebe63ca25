#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace undistill::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3 };

enum class OutputFormat { kJson, kCsv, kPretty };

struct RunConfig {
  double rank_tol = 1e-10;
  double ppt_tol = 1e-9;
  std::uint64_t seed = 0;
  std::size_t witness_budget = 50;
  OutputFormat format = OutputFormat::kJson;
  std::string output;  // empty: stdout
};

/// Runs one CLI invocation. `args` excludes the program name. Data goes to
/// `out` (or --output), diagnostics to `err`. Never throws.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace undistill::cli
