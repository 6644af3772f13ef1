#pragma once

#include <cstdint>
#include <vector>

#include "opacity/verify.hpp"

namespace opacity {

/// K-delay estimator automaton: a deterministic structure over the
/// observable events whose states are canonical sets of state tuples
/// (x_0..x_K), each tuple a per-epoch witness chain for some run consistent
/// with the observations. The trajectory variant additionally carries one
/// bit per chain link recording whether the connecting segment (left state
/// inclusive) visited a secret state.
///
/// Initial tuples are padded with epoch-0 representatives, which also covers
/// systems whose initial states have outgoing unobservable events.
struct DelayEstimator {
    int k = 0;
    bool trajectory = false;
    std::uint32_t record_len = 0;            // K+1 states, +1 bits word for trajectory
    std::vector<EventId> obs_events;         // observable Sigma events, in alphabet order
    std::vector<std::string> obs_names;
    std::vector<std::vector<std::uint32_t>> states;  // flat sorted records
    std::vector<std::vector<StateId>> trans;         // [state][obs index] or kNoState
    bool opaque = false;                     // weak (state) or strong (trajectory) verdict

    std::size_t num_states() const { return states.size(); }
    std::size_t num_tuples(StateId s) const { return states[s].size() / record_len; }
};

/// Weak K-step verifier: tracks candidate states visited in each of the last
/// K+1 observation epochs; revealing when some delay admits only secret
/// candidates.
DelayEstimator k_delay_state_estimator(const LabeledSystem& sys, int k,
                                       const VerifyOptions& opts = {});

/// Strong K-step verifier: tracks exact states at the last K+1 observation
/// instants plus per-segment secrecy flags; revealing when no chain is
/// secret-free.
DelayEstimator k_delay_trajectory_estimator(const LabeledSystem& sys, int k,
                                            const VerifyOptions& opts = {});

enum class GMap { Weak, Strong };

/// Checks that mapping every reachable estimator state through g lands
/// exactly on the secret-observer state reached by sigma_init followed by
/// the same observations. A test instrument, not a verifier.
bool check_g_map_correspondence(const LabeledSystem& sys, int k, GMap which,
                                const VerifyOptions& opts = {});

}  // namespace opacity
