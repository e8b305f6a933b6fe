#pragma once

#include <stdexcept>
#include <string>

namespace praag {

// Malformed input: bad files, bad flags, violated preconditions.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A result would depend on digits beyond the working p-adic precision.
class PrecisionError : public std::runtime_error {
public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// A computation exceeded the configured size budget.
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace praag
