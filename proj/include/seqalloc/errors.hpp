#pragma once

#include <stdexcept>
#include <string>

namespace seqalloc {

/// Malformed or inconsistent input (bad instance data, precondition violation).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A desk-scale guard was exceeded (the operation refuses to run unbounded).
class SizeGuardError : public std::runtime_error {
 public:
  explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// A replayed dynamics move failed better-response validation.
class ReplayError : public std::runtime_error {
 public:
  explicit ReplayError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace seqalloc
