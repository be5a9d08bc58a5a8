// ============================================================================
// errors.hpp -- exception taxonomy shared by the whole toolkit
//
// Every failure mode that callers are expected to distinguish gets its own
// exception type.  The CLI maps these onto process exit codes:
//
//   ParseError / UsageError / FragmentViolation / NotLeftTotalError  -> 2
//   ResourceLimitError                                               -> 3
//
// All types carry a human-readable message and derive from std::runtime_error
// so that generic catch sites keep working.
// ============================================================================
#pragma once

#include <stdexcept>
#include <string>

namespace teamltl {

// Raised by the formula / team-file / Kripke-file parsers on malformed input.
// The message includes a 1-based line/column position where available.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a formula is handed to an operation whose input language does
// not contain it (e.g. a Boolean negation inside a disjunctive-normal-form
// computation, or a team connective given to the single-trace engine).
struct FragmentViolation : std::runtime_error {
    explicit FragmentViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an input (or an enumeration forced by an input) exceeds the
// configured resource limits.  Evaluators prefer this over silently
// truncating a quantifier domain: answers are exact or absent, never wrong.
struct ResourceLimitError : std::runtime_error {
    explicit ResourceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a transition system has a state without successors; all
// algorithms here assume left-total transition relations so that every
// state starts at least one infinite run.
struct NotLeftTotalError : std::runtime_error {
    explicit NotLeftTotalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace teamltl
