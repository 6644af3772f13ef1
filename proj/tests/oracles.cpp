#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace opacity::testing {

namespace {

struct RunState {
    StateId state;
    RunProfile profile;

    auto key() const { return std::make_tuple(state, profile.key()); }
    bool operator<(const RunState& o) const { return key() < o.key(); }
};

/// Fixpoint closure of a run-state set under unobservable transitions.
std::set<RunState> close_unobservable(const LabeledSystem& sys, std::set<RunState> states) {
    std::deque<RunState> queue(states.begin(), states.end());
    while (!queue.empty()) {
        RunState cur = queue.front();
        queue.pop_front();
        for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e) {
            if (sys.observable[e]) continue;
            for (StateId t : sys.automaton.targets(cur.state, e)) {
                RunState next = cur;
                next.state = t;
                next.profile.last_secret = sys.state_secret(t);
                next.profile.window[0].first |= next.profile.last_secret;
                next.profile.window[0].second &= next.profile.last_secret;
                if (states.insert(next).second) queue.push_back(next);
            }
        }
    }
    return states;
}

}  // namespace

ProfileMap enumerate_profiles(const LabeledSystem& sys, int max_obs, int window_epochs) {
    ProfileMap out;
    const std::uint8_t max_epochs = std::uint8_t(window_epochs + 1);

    // the sigma_init epoch
    std::set<RunState> node;
    for (StateId x0 : sys.automaton.initial) {
        RunState rs;
        rs.state = x0;
        bool secret = sys.state_secret(x0);
        rs.profile.init_secret = secret;
        rs.profile.last_secret = secret;
        rs.profile.epochs = 1;
        rs.profile.window.assign(1, {secret, secret});
        node.insert(rs);
    }
    node = close_unobservable(sys, node);

    struct Frontier {
        std::vector<EventId> obs;
        std::set<RunState> states;
    };
    std::deque<Frontier> queue{{{}, std::move(node)}};

    while (!queue.empty()) {
        Frontier cur = std::move(queue.front());
        queue.pop_front();
        auto& profiles = out[cur.obs];
        for (const RunState& rs : cur.states) profiles.insert(rs.profile);
        if (int(cur.obs.size()) == max_obs) continue;

        for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e) {
            if (!sys.observable[e]) continue;
            std::set<RunState> next_states;
            for (const RunState& rs : cur.states) {
                for (StateId t : sys.automaton.targets(rs.state, e)) {
                    RunState next = rs;
                    next.state = t;
                    bool secret = sys.state_secret(t);
                    next.profile.last_secret = secret;
                    auto& win = next.profile.window;
                    win.insert(win.begin(), {secret, secret});
                    if (int(win.size()) > window_epochs) win.pop_back();
                    next.profile.epochs = std::min<std::uint8_t>(max_epochs, next.profile.epochs + 1);
                    next_states.insert(next);
                }
            }
            if (next_states.empty()) continue;
            Frontier next;
            next.obs = cur.obs;
            next.obs.push_back(e);
            next.states = close_unobservable(sys, std::move(next_states));
            queue.push_back(std::move(next));
        }
    }
    return out;
}

bool oracle_cso(const ProfileMap& profiles) {
    for (const auto& [obs, set] : profiles) {
        bool secret = false, explained = false;
        for (const auto& p : set) {
            secret |= p.last_secret;
            explained |= !p.last_secret;
        }
        if (secret && !explained) return false;
    }
    return true;
}

bool oracle_iso(const ProfileMap& profiles) {
    for (const auto& [obs, set] : profiles) {
        bool secret = false, explained = false;
        for (const auto& p : set) {
            secret |= p.init_secret;
            explained |= !p.init_secret;
        }
        if (secret && !explained) return false;
    }
    return true;
}

namespace {

bool epoch_secret(const RunProfile& p, int delay, int secret_type) {
    if (delay >= int(p.window.size())) return false;  // beyond the tracked window
    return secret_type == 1 ? p.window[delay].first : p.window[delay].second;
}

/// Secret at the given delay: the run must have at least delay+1 epochs.
bool delayed_secret(const RunProfile& p, int delay, int secret_type) {
    return p.epochs >= delay + 1 && epoch_secret(p, delay, secret_type);
}

/// Nonsecret at the given delay: too short to have the epoch, or the epoch
/// is not type-j secret.
bool delayed_nonsecret(const RunProfile& p, int delay, int secret_type) {
    return p.epochs <= delay || !epoch_secret(p, delay, secret_type);
}

}  // namespace

bool oracle_separate(const ProfileMap& profiles, int k, int secret_type) {
    for (const auto& [obs, set] : profiles) {
        for (int delay = 0; delay <= k; ++delay) {
            bool secret = false, explained = false;
            for (const auto& p : set) {
                secret |= delayed_secret(p, delay, secret_type);
                explained |= delayed_nonsecret(p, delay, secret_type);
            }
            if (secret && !explained) return false;
        }
    }
    return true;
}

bool oracle_joint(const ProfileMap& profiles, int k, int secret_type) {
    for (const auto& [obs, set] : profiles) {
        bool secret = false, explained = false;
        for (const auto& p : set) {
            bool any = false, all = true;
            for (int delay = 0; delay <= k; ++delay) {
                any |= delayed_secret(p, delay, secret_type);
                all &= delayed_nonsecret(p, delay, secret_type);
            }
            secret |= any;
            explained |= all;
        }
        if (secret && !explained) return false;
    }
    return true;
}

bool oracle_weak_k_step(const ProfileMap& profiles, int k) {
    // every split with a secret state at some delay <= k needs a matching
    // split with a nonsecret state at the same delay
    for (const auto& [obs, set] : profiles) {
        for (int delay = 0; delay <= k; ++delay) {
            bool secret_split = false, nonsecret_split = false;
            for (const auto& p : set) {
                if (p.epochs < delay + 1) continue;  // no such split
                if (delay < int(p.window.size())) {
                    secret_split |= p.window[delay].first;
                    nonsecret_split |= !p.window[delay].second;
                }
            }
            if (secret_split && !nonsecret_split) return false;
        }
    }
    return true;
}

bool oracle_strong_k_step(const ProfileMap& profiles, int k) {
    // one explanation must be secret-free at every split within the last
    // k+1 epochs
    for (const auto& [obs, set] : profiles) {
        if (set.empty()) continue;
        bool explained = false;
        for (const auto& p : set) {
            bool clean = true;
            for (int delay = 0; delay <= k; ++delay)
                clean &= delayed_nonsecret(p, delay, 1);
            explained |= clean;
        }
        if (!explained) return false;
    }
    return true;
}

LabeledSystem random_system(Rng rng, const RandomSystemOptions& opts) {
    std::uint32_t n = opts.min_states + std::uint32_t(rng.below(opts.max_states - opts.min_states + 1));
    std::uint32_t m = opts.min_events + std::uint32_t(rng.below(opts.max_events - opts.min_events + 1));

    std::vector<EventSym> events;
    std::vector<bool> observable;
    for (std::uint32_t e = 0; e < m; ++e) {
        bool obs = rng.below(100) < 60;
        events.push_back({std::string(obs ? "o" : "u") + std::to_string(e), false});
        observable.push_back(obs);
    }

    Nfa a(Alphabet::make(std::move(events)));
    for (std::uint32_t x = 0; x < n; ++x) a.add_state();
    for (StateId x = 0; x < n; ++x) {
        for (EventId e = 0; e < m; ++e) {
            if (opts.deterministic) {
                if (rng.below(100) < 55) a.add_transition(x, e, StateId(rng.below(n)));
            } else {
                int fanout = int(rng.below(3));
                for (int t = 0; t < fanout; ++t) a.add_transition(x, e, StateId(rng.below(n)));
            }
        }
    }

    std::vector<StateId> initial;
    if (opts.single_initial || opts.deterministic) {
        initial.push_back(StateId(rng.below(n)));
    } else {
        for (StateId x = 0; x < n; ++x)
            if (rng.below(100) < 40) initial.push_back(x);
        if (initial.empty()) initial.push_back(StateId(rng.below(n)));
    }
    a.set_initial(initial);

    std::vector<StateId> secret;
    for (StateId x = 0; x < n; ++x)
        if (rng.below(100) < 35) secret.push_back(x);

    if (opts.estimator_preconditions) {
        StateId init = initial[0];
        secret.erase(std::remove(secret.begin(), secret.end(), init), secret.end());
        // strip unobservable exits from the initial state
        Nfa b(a.alphabet);
        for (StateId x = 0; x < n; ++x) b.add_state();
        for (StateId x = 0; x < n; ++x)
            for (EventId e = 0; e < m; ++e)
                for (StateId t : a.targets(x, e))
                    if (x != init || observable[e]) b.add_transition(x, e, t);
        b.set_initial(initial);
        a = std::move(b);
    }
    return make_labeled_system(std::move(a), secret, observable);
}

Nfa random_nfa(Rng rng, const AlphabetPtr& alphabet, std::uint32_t max_states, double edge_prob) {
    std::uint32_t n = 1 + std::uint32_t(rng.below(max_states));
    Nfa g(alphabet);
    for (std::uint32_t q = 0; q < n; ++q) g.add_state();
    for (StateId q = 0; q < n; ++q)
        for (EventId e = 0; e < alphabet->size(); ++e)
            for (StateId t = 0; t < n; ++t)
                if (rng.uniform01() < edge_prob) g.add_transition(q, e, t);
    std::vector<StateId> initial, marked;
    for (StateId q = 0; q < n; ++q) {
        if (rng.below(100) < 40) initial.push_back(q);
        if (rng.below(100) < 40) marked.push_back(q);
    }
    if (initial.empty()) initial.push_back(0);
    g.set_initial(initial);
    g.set_marked(marked);
    return g;
}

std::set<std::vector<EventId>> concat_strings(const std::set<std::vector<EventId>>& a,
                                              const std::set<std::vector<EventId>>& b,
                                              std::size_t max_len) {
    std::set<std::vector<EventId>> out;
    for (const auto& u : a)
        for (const auto& v : b) {
            if (u.size() + v.size() > max_len) continue;
            std::vector<EventId> w = u;
            w.insert(w.end(), v.begin(), v.end());
            out.insert(std::move(w));
        }
    return out;
}

std::set<std::vector<EventId>> enumerate_marked_from_marked(const Nfa& g, std::size_t max_len) {
    Nfa from_marked = g;
    from_marked.set_initial(g.marked);
    return enumerate_marked(from_marked, max_len);
}

std::set<std::vector<EventId>> io_sequences_by_walk(const LabeledSystem& sys, const IoAlphabet& io,
                                                    std::size_t max_len) {
    // literal reading of the definition: walk every path, pair each input
    // with the label of the state it enters, prefix with (sigma_init, l(x0))
    std::map<std::pair<std::uint32_t, std::uint32_t>, EventId> pair_id;
    for (EventId e = 0; e < io.events->size(); ++e) pair_id.emplace(io.parts[e], e);

    std::set<std::vector<EventId>> out;
    struct Node {
        StateId state;
        std::vector<EventId> seq;
    };
    std::deque<Node> queue;
    for (StateId x0 : sys.automaton.initial) {
        Node node{x0, {pair_id.at({IoAlphabet::kInit, sys.label[x0]})}};
        out.insert(node.seq);
        queue.push_back(std::move(node));
    }
    while (!queue.empty()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        if (node.seq.size() == max_len) continue;
        for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e) {
            for (StateId t : sys.automaton.targets(node.state, e)) {
                Node next{t, node.seq};
                next.seq.push_back(pair_id.at({e, sys.label[t]}));
                out.insert(next.seq);
                queue.push_back(std::move(next));
            }
        }
    }
    return out;
}

}  // namespace opacity::testing
