#ifndef FRACMON_ERROR_HPP
#define FRACMON_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fracmon {

/// Malformed or inconsistent user input (bad orders, non-coprime weights, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Exact integer arithmetic left the representable range.
class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

/// A loop or phase point breaks one of the regularity conditions the
/// monodromy theorems need (fixed point on the loop, tangential crossing, ...).
class RegularityViolation : public std::runtime_error {
 public:
  RegularityViolation(std::string condition, const std::string& what)
      : std::runtime_error(what), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

/// A numerical procedure did not converge or drifted off the constraint set.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracmon

#endif  // FRACMON_ERROR_HPP
