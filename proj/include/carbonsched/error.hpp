#pragma once

#include <stdexcept>
#include <string>

namespace carbonsched {

enum class ErrorKind {
    Validation,   // malformed or inconsistent input
    Coverage,     // requested window not covered by the series, or infeasible
    Internal,     // an invariant that should always hold did not
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& what) { throw Error(ErrorKind::Validation, what); }
[[noreturn]] inline void fail_coverage(const std::string& what) { throw Error(ErrorKind::Coverage, what); }
[[noreturn]] inline void fail_internal(const std::string& what) { throw Error(ErrorKind::Internal, what); }

} // namespace carbonsched
