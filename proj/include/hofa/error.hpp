#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace hofa {

/// Input or precondition violation. `code()` is a stable dotted identifier
/// such as "parse.monomial" or "field.prime".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Raised when an operation's estimated work exceeds the configured ceiling.
class WorkLimitError : public std::runtime_error {
 public:
  WorkLimitError(std::string code, double estimate, double ceiling,
                 const std::string& message)
      : std::runtime_error(message),
        code_(std::move(code)),
        estimate_(estimate),
        ceiling_(ceiling) {}

  const std::string& code() const noexcept { return code_; }
  double estimate() const noexcept { return estimate_; }
  double ceiling() const noexcept { return ceiling_; }

 private:
  std::string code_;
  double estimate_;
  double ceiling_;
};

inline constexpr double kDefaultWorkCeiling = 1e9;

/// Execution knobs shared by every enumeration kernel.
struct RunOptions {
  double work_ceiling = kDefaultWorkCeiling;
  unsigned workers = 1;

  static RunOptions unlimited() {
    RunOptions o;
    o.work_ceiling = std::numeric_limits<double>::infinity();
    return o;
  }

  /// Throws WorkLimitError when `estimate` exceeds the ceiling.
  void check(double estimate, const std::string& what) const {
    if (estimate > work_ceiling) {
      throw WorkLimitError("work." + what, estimate, work_ceiling,
                           what + ": estimated work " + std::to_string(estimate) +
                               " exceeds ceiling " + std::to_string(work_ceiling));
    }
  }
};

}  // namespace hofa
