#pragma once

// Test-only oracles, independent of the verification pipeline: plain
// run enumeration with per-epoch secrecy bookkeeping, literal definition
// checks, and random instance generators.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "opacity/rng.hpp"
#include "opacity/specs.hpp"

namespace opacity::testing {

/// Secrecy profile of one bounded run, grouped by its observation string.
/// window[k] holds the flags of the epoch k observations ago (k = 0 is the
/// epoch in progress); epochs saturates at window capacity + 1.
struct RunProfile {
    bool init_secret = false;
    bool last_secret = false;
    std::uint8_t epochs = 0;
    std::vector<std::pair<bool, bool>> window;  // (some_secret, all_secret)

    auto key() const { return std::tie(init_secret, last_secret, epochs, window); }
    bool operator<(const RunProfile& o) const { return key() < o.key(); }
};

/// All run profiles per observation string (sigma_init implicit, so the
/// empty observation string stands for "just turned on").
using ProfileMap = std::map<std::vector<EventId>, std::set<RunProfile>>;

/// Exhaustive bounded run exploration: observation strings up to max_obs
/// symbols of Sigma_o, unobservable stretches closed by fixpoint.
ProfileMap enumerate_profiles(const LabeledSystem& sys, int max_obs, int window_epochs);

/// Bounded containment verdicts read off the profile map.
bool oracle_cso(const ProfileMap& profiles);
bool oracle_iso(const ProfileMap& profiles);
bool oracle_separate(const ProfileMap& profiles, int k, int secret_type);
bool oracle_joint(const ProfileMap& profiles, int k, int secret_type);

/// Literal bounded forms of the classical definitions over deterministic
/// systems: weak quantifies splits separately, strong asks for one
/// uniformly clean explanation.
bool oracle_weak_k_step(const ProfileMap& profiles, int k);
bool oracle_strong_k_step(const ProfileMap& profiles, int k);

struct RandomSystemOptions {
    std::uint32_t min_states = 2, max_states = 5;
    std::uint32_t min_events = 1, max_events = 3;
    bool deterministic = false;
    bool single_initial = false;
    bool estimator_preconditions = false;  // nonsecret initial, no unobservable exits
};

LabeledSystem random_system(Rng rng, const RandomSystemOptions& opts = {});

/// Random NFA over a given alphabet for the automata-core property tests.
Nfa random_nfa(Rng rng, const AlphabetPtr& alphabet, std::uint32_t max_states,
               double edge_prob = 0.35);

/// Language concatenation on enumerated string sets, truncated to max_len.
std::set<std::vector<EventId>> concat_strings(const std::set<std::vector<EventId>>& a,
                                              const std::set<std::vector<EventId>>& b,
                                              std::size_t max_len);

/// Marked strings of g starting from its marked states (Lmm), bounded.
std::set<std::vector<EventId>> enumerate_marked_from_marked(const Nfa& g, std::size_t max_len);

/// Def-style direct walk: every input-output sequence of length <= max_len
/// read off paths of the labeled system, as strings over io.events.
std::set<std::vector<EventId>> io_sequences_by_walk(const LabeledSystem& sys, const IoAlphabet& io,
                                                    std::size_t max_len);

}  // namespace opacity::testing
