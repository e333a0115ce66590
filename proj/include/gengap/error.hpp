#pragma once
#include <stdexcept>
#include <string>

namespace gengap {

// Base for all errors raised by the library. CLI maps these to exit codes:
// plain gg_error / hypothesis_error -> 1, budget_error -> 2, invariant_error -> 3.
struct gg_error : std::runtime_error {
    explicit gg_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input fails a documented precondition (non-coprime orders, bad modulus, ...).
struct hypothesis_error : gg_error {
    explicit hypothesis_error(const std::string& msg) : gg_error(msg) {}
};

// A bounded search or depth-capped verification ran out of budget before
// reaching a decision. Never used for a definite refutation.
struct budget_error : gg_error {
    explicit budget_error(const std::string& msg) : gg_error(msg) {}
};

// An internal cross-check failed; indicates a bug, not bad input.
struct invariant_error : gg_error {
    explicit invariant_error(const std::string& msg) : gg_error(msg) {}
};

} // namespace gengap
