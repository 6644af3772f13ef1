#include "opacity/generators.hpp"

#include <cmath>

namespace opacity {

namespace {

AlphabetPtr numbered_alphabet(const std::string& prefix, std::uint32_t count, std::uint32_t first = 0) {
    std::vector<EventSym> events;
    for (std::uint32_t j = 0; j < count; ++j)
        events.push_back({prefix + std::to_string(first + j), false});
    return Alphabet::make(std::move(events));
}

std::uint32_t log2_ceil(std::uint32_t n) {
    std::uint32_t bits = 0;
    while ((1u << bits) < n) ++bits;
    return bits;
}

}  // namespace

LabeledSystem gen_dense(std::uint32_t n, std::uint64_t seed, const DenseConfig& cfg) {
    if (n < 2) throw PreconditionError("dense family needs n >= 2");
    if (cfg.min_out < 1 || cfg.max_out < cfg.min_out)
        throw PreconditionError("bad out-degree range");
    const std::uint32_t num_events = 18, num_obs = 6;

    Nfa a(numbered_alphabet("e", num_events, 1));
    for (std::uint32_t x = 0; x < n; ++x) a.add_state();
    Rng rng = Rng(seed).split(0x64656e73);  // family-tagged stream
    for (StateId x = 0; x < n; ++x) {
        Rng local = rng.split(x);
        int out = cfg.min_out + int(local.below(std::uint64_t(cfg.max_out - cfg.min_out + 1)));
        for (int t = 0; t < out; ++t) {
            EventId e = EventId(local.below(num_events));
            StateId dst = StateId(local.below(n));
            a.add_transition(x, e, dst);
        }
    }
    std::vector<StateId> init(n);
    for (StateId x = 0; x < n; ++x) init[x] = x;
    a.set_initial(std::move(init));

    std::vector<bool> observable(num_events, false);
    for (std::uint32_t e = 0; e < num_obs; ++e) observable[e] = true;
    StateId secret = StateId(rng.split(0xabcd).below(n));
    return make_labeled_system(std::move(a), {secret}, observable,
                               "dense-" + std::to_string(n) + "-" + std::to_string(seed));
}

LabeledSystem gen_grid(std::uint32_t side, std::uint64_t seed, const GridConfig& cfg) {
    if (side < 2) throw PreconditionError("grid family needs side >= 2");
    const std::uint32_t n = side * side;
    const std::uint32_t num_obs = std::max(1u, log2_ceil(n));
    const std::uint32_t num_uo = std::max(1u, num_obs / 2);
    const std::uint32_t num_events = num_obs + num_uo;

    std::vector<EventSym> events;
    for (std::uint32_t j = 0; j < num_obs; ++j) events.push_back({"o" + std::to_string(j + 1), false});
    for (std::uint32_t j = 0; j < num_uo; ++j) events.push_back({"u" + std::to_string(j + 1), false});

    Nfa a(Alphabet::make(std::move(events)));
    for (std::uint32_t x = 0; x < n; ++x) a.add_state();

    Rng rng = Rng(seed).split(0x67726964);
    auto cell = [side](std::uint32_t r, std::uint32_t c) { return r * side + c; };
    for (std::uint32_t r = 0; r < side; ++r) {
        for (std::uint32_t c = 0; c < side; ++c) {
            Rng local = rng.split(cell(r, c));
            const std::pair<int, int> moves[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
            for (const auto& [dr, dc] : moves) {
                int nr = int(r) + dr, nc = int(c) + dc;
                if (nr < 0 || nc < 0 || nr >= int(side) || nc >= int(side)) continue;
                if (local.uniform01() < cfg.drop_prob) continue;
                EventId e = EventId(local.below(num_events));
                a.add_transition(cell(r, c), e, cell(std::uint32_t(nr), std::uint32_t(nc)));
            }
        }
    }
    std::vector<StateId> init(n);
    for (StateId x = 0; x < n; ++x) init[x] = x;
    a.set_initial(std::move(init));

    std::vector<bool> observable(num_events, false);
    for (std::uint32_t e = 0; e < num_obs; ++e) observable[e] = true;

    std::vector<StateId> secret;
    Rng pick = rng.split(0x5343);
    while (secret.size() < num_obs) {  // as many secret states as observable events
        StateId x = StateId(pick.below(n));
        bool fresh = true;
        for (StateId s : secret) fresh &= (s != x);
        if (fresh) secret.push_back(x);
    }
    return make_labeled_system(std::move(a), secret, observable,
                               "grid-" + std::to_string(side) + "-" + std::to_string(seed));
}

LabeledSystem gen_cyclic(std::uint32_t n) {
    if (n < 2) throw PreconditionError("cyclic family needs n >= 2");
    Nfa a(numbered_alphabet("sigma_", n));
    for (std::uint32_t x = 0; x < n; ++x) a.add_state(std::to_string(x));
    for (StateId x = 0; x < n; ++x)
        for (EventId j = 0; j < n; ++j) a.add_transition(x, j, (x + j) % n);
    std::vector<StateId> init;
    for (StateId x = 1; x < n; ++x) init.push_back(x);
    a.set_initial(std::move(init));
    return make_labeled_system(std::move(a), {0}, std::vector<bool>(n, true),
                               "cyclic-" + std::to_string(n));
}

LabeledSystem gen_reset(std::uint32_t i) {
    if (i < 2) throw PreconditionError("reset family needs i >= 2");
    Nfa a(numbered_alphabet("sigma_", i, 1));
    for (std::uint32_t x = 0; x < i; ++x) a.add_state(std::to_string(x + 1));  // states named 1..i
    for (StateId x = 0; x < i; ++x)
        for (EventId e = 0; e < i; ++e) a.add_transition(x, e, e);  // event sigma_k resets to state k
    a.set_initial({1});                                             // the state named 2
    return make_labeled_system(std::move(a), {0}, std::vector<bool>(i, true),
                               "reset-" + std::to_string(i));
}

Nfa gen_revblow(std::uint32_t n) {
    if (n < 1) throw PreconditionError("revblow family needs n >= 1");
    Nfa g(Alphabet::make({{"a", false}, {"b", false}}));
    for (std::uint32_t q = 0; q <= n; ++q) g.add_state(std::to_string(q));
    g.add_transition(0, 0, 0);
    g.add_transition(0, 1, 0);
    g.add_transition(0, 1, 1);
    for (StateId q = 1; q < n; ++q) {
        g.add_transition(q, 0, q + 1);
        g.add_transition(q, 1, q + 1);
    }
    g.set_initial({0});
    g.set_marked({n});
    return g;
}

}  // namespace opacity
