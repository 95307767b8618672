#pragma once

#include <stdexcept>
#include <string>

namespace semivar {

enum class ErrorCode {
  argument = 1,
  parse = 2,
  unsupported = 3,
  limit_does_not_exist = 4,
  no_convergence = 5,
  depth_exceeded = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace semivar
