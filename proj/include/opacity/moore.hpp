#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opacity/nfa.hpp"

namespace opacity {

/// Automaton with state labels and an observable-event subset. Marked states
/// of `automaton` are ignored; its runs are the prefix-closed behavior. For
/// the shipped opacity notions the label set is {NS, S}; the transform below
/// works for any finite label set.
struct LabeledSystem {
    std::string name;
    Nfa automaton;                         // alphabet = Sigma, no silent symbol
    std::vector<std::uint32_t> label;      // per state -> index into label_names
    std::vector<std::string> label_names;  // e.g. {"NS", "S"}
    std::vector<bool> observable;          // per Sigma event

    std::uint32_t num_states() const { return automaton.num_states; }
    bool state_secret(StateId x) const { return label_names[label[x]] == "S"; }
    std::vector<StateId> secret_states() const;
    void validate() const;
};

/// Builds a two-label (NS/S) system from a plain automaton and a secret set.
LabeledSystem make_labeled_system(Nfa automaton, const std::vector<StateId>& secret,
                                  const std::vector<bool>& observable, std::string name = {});

/// Structural equality ignoring display names.
bool structurally_equal(const LabeledSystem& a, const LabeledSystem& b);

/// Input-output pair alphabet (Sigma ∪ {sigma_init}) × A, restricted to pairs
/// realized by some transition plus the (sigma_init, a) pairs of realized
/// initial labels. Every pair carries a secrecy and an observability flag;
/// sigma_init pairs are observable by convention.
struct IoAlphabet {
    static constexpr std::uint32_t kInit = UINT32_MAX;  // input slot of sigma_init

    AlphabetPtr events;                    // the E table, no silent symbol
    std::vector<bool> secret;              // per pair: label is S
    std::vector<bool> observable;          // per pair
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parts;  // (input event or kInit, label)
    std::vector<std::string> input_names;   // per Sigma event
    std::vector<bool> input_observable;     // per Sigma event
    std::vector<std::string> label_names;

    bool is_secret(EventId e) const { return secret[e]; }
    bool is_observable(EventId e) const { return observable[e]; }
    bool is_init_pair(EventId e) const { return parts[e].first == kInit; }
    /// Pairs with the given flags; secret/observable < 0 means "don't care".
    std::vector<EventId> select(int secret_flag, int observable_flag) const;
};

IoAlphabet make_io_alphabet(const LabeledSystem& sys);

/// Static mask: a per-event table extended to strings letter by letter,
/// possibly erasing events to the silent output symbol.
struct ObservationMask {
    AlphabetPtr domain;          // E
    AlphabetPtr image;           // Gamma ∪ {eps}; silent symbol last
    std::vector<EventId> map;    // per domain event -> image event id

    EventId apply(EventId e) const { return map[e]; }
    bool erases(EventId e) const { return image->is_silent(map[e]); }
    /// Theta(w): image string with erased events dropped.
    std::vector<EventId> apply_string(std::span<const EventId> w) const;
    std::vector<std::string> apply_string_names(std::span<const EventId> w) const;
};

/// Rewrites a state-labeled system into an automaton over IO pairs: an
/// artificial initial state turns the system on via (sigma_init, a) edges and
/// every transition carries its destination's label. All original states are
/// marked; the artificial state gets index |X|.
Nfa label_transform(const LabeledSystem& sys, const IoAlphabet& io);

/// The observation map induced by the observable events: an IO pair maps to
/// its input component if observable, and is erased otherwise.
ObservationMask induced_mask(const IoAlphabet& io);

/// Theta(G): same states, events replaced by their observations. The result
/// is an epsilon-NFA over Gamma ∪ {eps}.
Nfa apply_mask(const Nfa& g, const ObservationMask& mask);

/// Composition outer ∘ inner; defined when outer is total on inner's image.
ObservationMask compose(const ObservationMask& outer, const ObservationMask& inner);

/// Componentwise projections of an IO string: (inputs, output labels).
std::pair<std::vector<std::string>, std::vector<std::string>> io_projections(
    const IoAlphabet& io, std::span<const EventId> run);

}  // namespace opacity
