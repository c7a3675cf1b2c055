#ifndef LUMB_ERRORS_HPP
#define LUMB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lumb {

class InvalidAssortment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidUtility : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an agent receives an outcome that cannot follow its current offer.
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lumb

#endif  // LUMB_ERRORS_HPP
