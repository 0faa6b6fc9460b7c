#pragma once

#include <stdexcept>
#include <string>

namespace gelfand {

/// Argument outside the domain of a function (e.g. iterated logarithm of a
/// value whose lower tower level is non-positive).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what, int level = -1)
      : std::domain_error(what), level_(level) {}

  /// Tower level j at which H_j(y) <= 0 was hit, or -1 when not applicable.
  int level() const noexcept { return level_; }

 private:
  int level_;
};

/// A result that does not fit in a double.
class OverflowError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// An iterative or adaptive procedure that failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gelfand
