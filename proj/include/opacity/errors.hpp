#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace opacity {

/// Base class for all errors raised by the library.
struct OpacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two automata were combined over different event tables.
struct AlphabetMismatchError : OpacityError {
    using OpacityError::OpacityError;
};

/// A DFA operation required a complete transition function.
struct NotCompleteError : OpacityError {
    using OpacityError::OpacityError;
};

/// A structural precondition of an operation was violated.
struct PreconditionError : OpacityError {
    using OpacityError::OpacityError;
};

/// A mask was applied to an automaton outside its domain.
struct MaskDomainError : OpacityError {
    using OpacityError::OpacityError;
};

/// The requested verification method is not applicable to the spec.
struct MethodError : OpacityError {
    using OpacityError::OpacityError;
};

/// Separate K-step verification via a single containment needs an
/// observation-extendable system.
struct NotExtendableError : OpacityError {
    using OpacityError::OpacityError;
};

/// A state-space exploration exceeded its configured budget. Never a
/// verdict: callers must treat this as "unknown".
struct BudgetExceededError : OpacityError {
    std::size_t explored = 0;
    std::optional<unsigned long long> required_k;

    explicit BudgetExceededError(const std::string& what, std::size_t explored_ = 0)
        : OpacityError(what), explored(explored_) {}
};

/// Wall-clock limit hit during an exploration (used by the bench harness).
struct TimeoutError : OpacityError {
    using OpacityError::OpacityError;
};

/// Error while parsing the textual automaton format; carries a position.
struct ParseError : OpacityError {
    int line = 0;
    int col = 0;
    std::string kind;  // SyntaxError, UndefinedState, UndefinedEvent, DuplicateDeclaration

    ParseError(std::string kind_, int line_, int col_, const std::string& what)
        : OpacityError(kind_ + " at " + std::to_string(line_) + ":" + std::to_string(col_) +
                       ": " + what),
          line(line_),
          col(col_),
          kind(std::move(kind_)) {}
};

}  // namespace opacity
