#pragma once

#include <stdexcept>
#include <string>

namespace qtrack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A graph violates a structural invariant (balance, connectivity, link set).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to a numerical routine (non-finite input, bad parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace qtrack
