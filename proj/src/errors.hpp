#pragma once

#include <stdexcept>
#include <string>

namespace bubblex {

enum class Err {
    Parse = 1,
    NotADecomposition,
    DegenerateCell,
    InconsistentDim,
    UnknownSimplex,
    DegreeOverflow,
    MeshMismatch,
    DegreeMismatch,
    NotAFace,
    NotDivisible,
    NotClosed,
    NoSolution,
    Incompatible,
    IndexMismatch,
    SingularPoint,
    Nonconforming,
    InvalidArgument,
    Io,
    Internal,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& msg)
        : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code), detail_(msg) {}
    Err code() const { return code_; }
    const std::string& detail() const { return detail_; }

  private:
    Err code_;
    std::string detail_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace bubblex
