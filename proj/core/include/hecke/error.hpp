#pragma once

#include <stdexcept>
#include <string>

namespace hecke {

/// Broad failure classes. The CLI maps each onto a distinct exit code.
enum class ErrorKind {
  InvalidArgument,  // malformed input or violated precondition
  NotComputed,      // requested data is absent from the store
  Computation,      // the algorithm could not finish (precision, bound, ...)
  StoreCorruption,  // on-disk state is inconsistent
  Internal,         // an invariant that should be impossible failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

inline void ensure(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::Internal, what);
}

}  // namespace hecke
