#pragma once

#include <stdexcept>
#include <string>

namespace defcyc {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cayley-table validation failure. Witness indices identify the offending
// cell, row, or triple (unused slots stay -1).
struct GroupValidationError : Error {
    enum class Kind { NotClosed, NoIdentityAtZero, NotAssociative, NotInvertible };
    Kind kind;
    int i = -1, j = -1, k = -1;
    GroupValidationError(Kind kind_, const std::string& msg, int i_ = -1, int j_ = -1, int k_ = -1)
        : Error(msg), kind(kind_), i(i_), j(j_), k(k_) {}
};

// An operation refused because the input exceeds the configured scale guard.
struct ScaleGuardError : Error {
    using Error::Error;
};

// A search or evaluation exhausted its node/atom budget.
struct BudgetExceededError : Error {
    using Error::Error;
};

struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct UnknownConstantError : Error {
    using Error::Error;
};

struct UnboundVariableError : Error {
    using Error::Error;
};

// A quantifier in the guarded fragment whose variable cannot be pinned to a
// finite solution set. The message carries the offending subformula.
struct UnguardedQuantifierError : Error {
    using Error::Error;
};

struct NonlinearGuardError : Error {
    using Error::Error;
};

struct ShapeMismatchError : Error {
    using Error::Error;
};

struct FileFormatError : Error {
    int line;
    FileFormatError(const std::string& msg, int line_)
        : Error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

} // namespace defcyc
