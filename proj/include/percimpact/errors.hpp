#ifndef PERCIMPACT_ERRORS_HPP_
#define PERCIMPACT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace percimpact {

// Bad input data or parameters out of their documented domain.
// The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / stream failures. The CLI maps this to exit code 1.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace percimpact

#endif  // PERCIMPACT_ERRORS_HPP_
