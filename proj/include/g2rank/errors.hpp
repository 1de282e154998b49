#pragma once

#include <stdexcept>
#include <string>

namespace g2r {

// Violated caller contract (bad input, unusable flag combination, bad prime).
// The CLI maps this to exit code 2.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// A broken internal invariant (e.g. Weil-bound violation in a point count).
// The CLI maps this to exit code 3.
struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation that hit a configured guard before reaching a decision.
// Carries the partial evidence accumulated so far as plain text.
struct undecided_error : std::runtime_error {
    std::string partial_evidence;
    undecided_error(const std::string& what, std::string evidence)
        : std::runtime_error(what), partial_evidence(std::move(evidence)) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw precondition_error(msg);
}

inline void check_internal(bool cond, const std::string& msg) {
    if (!cond) throw internal_error(msg);
}

}  // namespace g2r
