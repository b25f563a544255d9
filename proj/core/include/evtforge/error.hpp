#pragma once

#include <stdexcept>
#include <string>

namespace evtforge {

// Two families of failure. The CLI maps DomainError to exit code 1 and
// IoError (unreadable inputs, malformed files) to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace evtforge
