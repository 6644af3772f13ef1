#pragma once

#include "opacity/moore.hpp"
#include "opacity/rng.hpp"

namespace opacity {

struct DenseConfig {
    int min_out = 1;  // per-state out-degree range, inclusive
    int max_out = 6;
};

/// Dense random family: 18 events with 6 observable, all states initial,
/// exactly one secret state.
LabeledSystem gen_dense(std::uint32_t n, std::uint64_t seed, const DenseConfig& cfg = {});

struct GridConfig {
    double drop_prob = 0.3;
};

/// Grid family: side^2 states on a square grid with 4-adjacent moves, edges
/// dropped or labeled at random; ceil(log2(n)) observable events and secret
/// states, all states initial.
LabeledSystem gen_grid(std::uint32_t side, std::uint64_t seed, const GridConfig& cfg = {});

/// Cyclic family: state i moves to (i+j) mod n on event j, everything
/// observable, state 0 secret, all other states initial.
LabeledSystem gen_cyclic(std::uint32_t n);

/// Reset family: event k moves every state to k (states named 1..i), all
/// observable, initial state 2, state 1 secret.
LabeledSystem gen_reset(std::uint32_t i);

/// Two-symbol NFA with n+1 states whose forward determinization is
/// exponential while the reverse one stays linear.
Nfa gen_revblow(std::uint32_t n);

}  // namespace opacity
