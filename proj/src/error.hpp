#pragma once

#include <stdexcept>
#include <string>

namespace spcecon {

enum class Errc {
  invalid_argument = 1,
  unknown_instance = 2,
  singular_matrix = 3,
  run_cap_exceeded = 4,
  io_failure = 5,
  bad_json = 6,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace spcecon
