#pragma once

#include <stdexcept>
#include <string>

namespace undistill {

/// Category of a library failure. The CLI maps `kNumerical` to exit code 3
/// and every other kind to exit code 2.
enum class ErrorKind {
  kNotHermitian,
  kNonConvergence,
  kBadSubsystemSpec,
  kNotNormalized,
  kDimensionMismatch,
  kNotTracePreserving,
  kBadParameter,
  kPreconditionRankNotLow,
  kBadSpec,
  kInvalidState,
  kParse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  bool is_numerical() const noexcept { return kind_ == ErrorKind::kNonConvergence; }

 private:
  ErrorKind kind_;
};

}  // namespace undistill
