#pragma once

#include <stdexcept>
#include <string>

namespace trdecomp {

/// Violated precondition on an argument: bad index, shape mismatch,
/// singular gauge, out-of-range construction parameter.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Failure to open, read, parse or write a tensor/TR text file.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trdecomp
