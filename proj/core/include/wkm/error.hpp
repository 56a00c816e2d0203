#ifndef WKM_ERROR_HPP
#define WKM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wkm {

/// Bad input or bad parameters. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that is well formed but too large to carry out (exit code 3).
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampling distribution whose total mass is zero.
class DegenerateDistribution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wkm

#endif  // WKM_ERROR_HPP
