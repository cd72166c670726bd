#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace coarselab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An input violated a documented precondition.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// A constructed object failed one of its type invariants.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(what) {}
};

/// Parse or schema problem while reading external data.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

[[noreturn]] void fail_precondition(const std::string& what);
[[noreturn]] void fail_invariant(const std::string& what);

inline void require(bool cond, const std::string& what) {
  if (!cond) fail_precondition(what);
}

}  // namespace coarselab
