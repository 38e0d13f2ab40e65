#ifndef PAIRLABEL_ERRORS_H_
#define PAIRLABEL_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairlabel {

// Invalid numeric parameter or precondition (t > n, eps >= 0.5, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent configuration, e.g. a simulated oracle asked about a point
// without a posterior, or a config file referencing a missing path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data. Carries the 1-based line number when known.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " +
                                           what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A point source could not supply the requested number of points.
class ExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pairlabel

#endif  // PAIRLABEL_ERRORS_H_
