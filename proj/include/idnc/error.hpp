#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idnc {

/// Malformed matrix or X3C text input. Carries the 1-based line number.
class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// An enumeration guard or combination budget was exceeded.
class resource_limit_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace idnc
