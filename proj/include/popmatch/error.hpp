#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace popmatch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input. `path()` is a JSON-pointer-like location
/// of the offending field ("/agents/2/weight"), empty when not applicable.
class InputError : public Error {
 public:
  explicit InputError(std::string message, std::string path = {})
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// An exhaustive search would exceed its configured cap. Never silently
/// truncated.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A constructor or generator was called outside its domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace popmatch
