#ifndef QLR_ERRORS_HPP
#define QLR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qlr {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Map family fails the expansion check at construction.
class NotExpandingError : public Error {
 public:
  explicit NotExpandingError(const std::string& msg) : Error(msg) {}
};

/// Pullback iteration or response sum cannot converge (CLI exit code 3).
class NonMixingError : public Error {
 public:
  explicit NonMixingError(const std::string& msg) : Error(msg) {}
};

/// Configured grid cannot resolve an integrand to tolerance (CLI exit code 4).
class AliasingBudgetError : public Error {
 public:
  explicit AliasingBudgetError(const std::string& msg) : Error(msg) {}
};

/// Requested derivative order exceeds the family's order.
class OrderError : public Error {
 public:
  explicit OrderError(const std::string& msg) : Error(msg) {}
};

}  // namespace qlr

#endif  // QLR_ERRORS_HPP
