#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "opacity/alphabet.hpp"

namespace opacity {

/// Caps on state-space explorations. Exceeding max_states raises
/// BudgetExceededError; a set deadline raises TimeoutError.
struct ExploreLimits {
    std::size_t max_states = 5'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void check_deadline() const;
};

/// Nondeterministic finite automaton over a shared alphabet. States are
/// dense integers; transition targets are kept sorted and deduplicated.
struct Nfa {
    AlphabetPtr alphabet;
    std::uint32_t num_states = 0;
    std::vector<StateId> initial;  // sorted unique
    std::vector<StateId> marked;   // sorted unique
    std::vector<std::string> state_names;  // empty, or one per state

    Nfa() = default;
    explicit Nfa(AlphabetPtr alpha) : alphabet(std::move(alpha)) {}

    StateId add_state(std::string name = {});
    void add_transition(StateId src, EventId event, StateId dst);
    const std::vector<StateId>& targets(StateId src, EventId event) const;

    void set_initial(std::vector<StateId> states);
    void set_marked(std::vector<StateId> states);
    bool is_initial(StateId q) const;
    bool is_marked(StateId q) const;
    bool has_silent_transitions() const;
    std::size_t num_transitions() const;
    const std::string& name_of(StateId q) const;

    /// Checks the structural invariants (endpoints in range, sorted sets).
    void validate() const;

  private:
    // next_[q][e] = sorted target list; rows sized lazily on first use
    std::vector<std::vector<std::vector<StateId>>> next_;
    static const std::vector<StateId> kEmpty;

    friend struct NfaBuilderAccess;
};

/// Deterministic, complete automaton produced by the power-set construction.
/// One dead sink is always materialized so complementation never needs to
/// re-complete. Subset labels are stored packed (one bit per origin state).
struct Dfa {
    AlphabetPtr alphabet;        // non-silent symbols only
    std::uint32_t num_states = 0;
    std::uint32_t num_events = 0;
    StateId initial = 0;
    StateId dead = 0;
    std::vector<StateId> trans;  // row-major [q * num_events + e]
    std::vector<bool> marked;
    std::uint32_t origin_states = 0;
    std::uint32_t words_per_state = 0;
    std::vector<std::uint64_t> subset_bits;            // [q * words_per_state]
    std::vector<std::pair<StateId, EventId>> parent;   // BFS tree, parent[initial] = {self, 0}

    StateId step(StateId q, EventId e) const { return trans[q * num_events + e]; }
    bool is_marked(StateId q) const { return marked[q]; }
    bool is_dead(StateId q) const { return q == dead; }
    /// States other than the dead sink; these are exactly the subsets the
    /// construction reached.
    std::size_t num_live_states() const { return num_states - 1; }

    const std::uint64_t* subset_words(StateId q) const { return subset_bits.data() + std::size_t(q) * words_per_state; }
    bool subset_contains(StateId q, StateId origin) const {
        return (subset_words(q)[origin >> 6] >> (origin & 63)) & 1u;
    }
    std::vector<StateId> subset(StateId q) const;
    /// Shortest event string reaching q, from the BFS predecessor tree.
    std::vector<EventId> access_string(StateId q) const;
    bool is_complete() const;

    Nfa as_nfa() const;
};

// --- automata algebra ------------------------------------------------------

/// Synchronous product over the shared alphabet; marked pairs are pairs of
/// marked states. Only the part reachable from initial pairs is built,
/// breadth-first. Inputs must not use silent transitions.
Nfa product(const Nfa& g, const Nfa& h);

/// Product that also reports, for every product state, the originating pair.
Nfa product(const Nfa& g, const Nfa& h, std::vector<std::pair<StateId, StateId>>* pair_of_state);

/// Power-set construction with epsilon-closure over the silent symbol.
/// The result is complete over the non-silent alphabet.
Dfa determinize(const Nfa& g, const ExploreLimits& limits = {});

/// Marked-set inversion; requires a complete DFA.
Dfa complement(Dfa d);

/// Transition flip with initial and marked sets swapped.
Nfa reverse(const Nfa& g);

/// Merges the marked states of h1 with the initial states of h2 so that the
/// result marks (Lm(h1) ∪ Lmm(h1)) · Lm(h2). Requires h2's initial and
/// marked sets disjoint and no h2 transitions back into its initial states.
Nfa merge_concatenate(const Nfa& h1, const Nfa& h2);

/// As above; also reports where each h2 state landed in the result
/// (h2_map[q2] = result index, or kNoState for dropped initial states).
Nfa merge_concatenate(const Nfa& h1, const Nfa& h2, std::vector<StateId>* h2_map);

/// All marked strings of length <= max_len, silent events contributing no
/// symbols. The oracle backbone for the property tests.
std::set<std::vector<EventId>> enumerate_marked(const Nfa& g, std::size_t max_len,
                                                const ExploreLimits& limits = {});

/// Shortest event string (by transition count) reaching a state satisfying
/// pred, or nullopt. Breadth-first, so witnesses are minimal.
std::optional<std::vector<EventId>> check_reachable_predicate(
    const Nfa& g, const std::function<bool(StateId)>& pred);

/// True iff the generated language of g is all of E* (over the non-silent
/// alphabet): the subset construction never reaches the empty set.
bool is_universal(const Nfa& g, const ExploreLimits& limits = {});

/// Formats a marked-string set with event names, for test diagnostics.
std::string format_strings(const Nfa& g, const std::set<std::vector<EventId>>& strings);

}  // namespace opacity
