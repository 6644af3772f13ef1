#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "opacity/specs.hpp"

namespace opacity {

enum class Method { Forward, Reverse, SecretObserver, Auto };

std::string method_name(Method m);

struct VerifyOptions {
    std::size_t max_states = 5'000'000;          // cap on constructed verifier states
    std::optional<double> timeout_ms;            // wall-clock cap for one verification
    unsigned long long max_separate_infinite_k = 4096;  // cap on the 2^n reduction

    ExploreLimits limits() const;
};

struct VerifyStats {
    std::size_t verifier_states = 0;  // live states of the determinized core
    Method method = Method::Forward;
    std::chrono::nanoseconds elapsed{0};
};

struct Verdict {
    bool opaque = false;
    std::optional<std::vector<std::string>> witness;  // shortest violating observation
    std::optional<int> violated_level;                // separate K-step only
    VerifyStats stats;

    std::string witness_string() const;
};

/// Checks Theta(Lm(g)) ⊆ Theta(Lm(g × spec)) with the chosen comparison
/// method. The secret-observer method requires a universal spec.
Verdict verify_containment(const Nfa& g, const SpecAutomaton& spec, const ObservationMask& mask,
                           Method method, const VerifyOptions& opts = {});

/// Full state-based pipeline: label transform, induced mask, notion-specific
/// spec, then containment. Separate K-step notions route to the dedicated
/// procedures below; separate infinite-step routes to the 2^n reduction.
Verdict verify_state_based(const LabeledSystem& sys, const OpacityNotion& notion,
                           Method method = Method::Auto, const VerifyOptions& opts = {});

/// Separate K-step via one secret observer and K+1 marking passes;
/// violated_level reports the smallest failing delay.
Verdict verify_separate_kstep_so(const LabeledSystem& sys, int k, int secret_type,
                                 const VerifyOptions& opts = {});

/// Separate K-step reduced to the single level-K containment; the system
/// must be observation extendable.
Verdict verify_separate_kstep_ext(const LabeledSystem& sys, int k, int secret_type, Method method,
                                  const VerifyOptions& opts = {});

/// Separate infinite-step via the K = 2^n reduction; practical only for
/// small systems, otherwise raises BudgetExceededError carrying the K it
/// would need.
Verdict verify_infinite_separate(const LabeledSystem& sys, int secret_type,
                                 const VerifyOptions& opts = {});

/// True iff from every reachable state some observable transition remains
/// reachable through unobservable moves.
bool check_observation_extendable(const LabeledSystem& sys);

/// Adds a fresh observable self-loop event to every state. Separate K-step
/// verdicts are preserved and the result is observation extendable.
LabeledSystem make_observation_extendable(const LabeledSystem& sys);

}  // namespace opacity
