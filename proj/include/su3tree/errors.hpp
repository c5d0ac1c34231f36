#pragma once

#include <stdexcept>
#include <string>

namespace su3tree {

// Bad user-facing input: config files, CLI values, out-of-range parameters.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& m) : std::runtime_error(m) {}
};

// Working precision of a truncated-series computation was exhausted.
// Callers retry with a larger precision; the CLI maps an unrecovered
// instance to its own exit code.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& m) : std::runtime_error(m) {}
};

// A finite search window (degree/valuation bound, closure cap, ...) was
// exhausted without reaching the certified state.
struct window_error : std::runtime_error {
    explicit window_error(const std::string& m) : std::runtime_error(m) {}
};

// A structural invariant that is supposed to hold by construction failed.
struct invariant_error : std::logic_error {
    explicit invariant_error(const std::string& m) : std::logic_error(m) {}
};

// Precondition violation on a library entry point (bad domain element,
// context mismatch, non-unitary matrix, ...).
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& m) : std::domain_error(m) {}
};

#define SU3_CHECK(cond, msg)                      \
    do {                                          \
        if (!(cond)) throw su3tree::domain_error(msg); \
    } while (0)

#define SU3_INVARIANT(cond, msg)                     \
    do {                                             \
        if (!(cond)) throw su3tree::invariant_error(msg); \
    } while (0)

}  // namespace su3tree
