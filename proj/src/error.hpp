#ifndef DERANGE_ERROR_HPP
#define DERANGE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace derange {

// Status values shared with the C API (see include/derange/derange.h).
// 2 and 3 line up with the CLI exit codes for bad parameters and
// exhausted term budgets.
enum class Status : int {
  ok = 0,
  invalid = 2,
  budget = 3,
  io = 4,
  internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}

  Status status() const noexcept { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) {
  throw Error(Status::invalid, msg);
}

[[noreturn]] inline void fail_budget(const std::string& msg) {
  throw Error(Status::budget, msg);
}

[[noreturn]] inline void fail_io(const std::string& msg) {
  throw Error(Status::io, msg);
}

[[noreturn]] inline void fail_internal(const std::string& msg) {
  throw Error(Status::internal, msg);
}

}  // namespace derange

#endif
