#pragma once

#include <stdexcept>
#include <string>

namespace deg {

/// Raised for invalid arguments, malformed files and violated preconditions.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

} // namespace deg
