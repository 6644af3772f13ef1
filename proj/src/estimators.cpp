#include "opacity/estimators.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <unordered_map>

namespace opacity {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto x : v) {
            h ^= x;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

/// Unobservable reach (any labels), one bit row per state.
std::vector<std::vector<StateId>> unobservable_reach(const LabeledSystem& sys) {
    const Nfa& a = sys.automaton;
    std::vector<std::vector<StateId>> reach(a.num_states);
    std::vector<bool> seen;
    for (StateId x = 0; x < a.num_states; ++x) {
        seen.assign(a.num_states, false);
        std::deque<StateId> queue{x};
        seen[x] = true;
        while (!queue.empty()) {
            StateId cur = queue.front();
            queue.pop_front();
            reach[x].push_back(cur);
            for (EventId e = 0; e < a.alphabet->size(); ++e) {
                if (sys.observable[e]) continue;
                for (StateId t : a.targets(cur, e))
                    if (!seen[t]) {
                        seen[t] = true;
                        queue.push_back(t);
                    }
            }
        }
        std::sort(reach[x].begin(), reach[x].end());
    }
    return reach;
}

/// Unobservable reach with a "visited a secret state so far" flag; the start
/// state's own label counts.
std::vector<std::array<std::vector<StateId>, 2>> flagged_reach(const LabeledSystem& sys) {
    const Nfa& a = sys.automaton;
    std::vector<std::array<std::vector<StateId>, 2>> reach(a.num_states);
    std::vector<std::array<bool, 2>> seen;
    for (StateId x = 0; x < a.num_states; ++x) {
        seen.assign(a.num_states, {false, false});
        int start_flag = sys.state_secret(x) ? 1 : 0;
        std::deque<std::pair<StateId, int>> queue{{x, start_flag}};
        seen[x][start_flag] = true;
        while (!queue.empty()) {
            auto [cur, flag] = queue.front();
            queue.pop_front();
            reach[x][flag].push_back(cur);
            for (EventId e = 0; e < a.alphabet->size(); ++e) {
                if (sys.observable[e]) continue;
                for (StateId t : a.targets(cur, e)) {
                    int nf = flag | (sys.state_secret(t) ? 1 : 0);
                    if (!seen[t][nf]) {
                        seen[t][nf] = true;
                        queue.emplace_back(t, nf);
                    }
                }
            }
        }
        std::sort(reach[x][0].begin(), reach[x][0].end());
        std::sort(reach[x][1].begin(), reach[x][1].end());
    }
    return reach;
}

struct EstimatorBuilder {
    const LabeledSystem& sys;
    const VerifyOptions& opts;
    int k;
    bool trajectory;
    DelayEstimator est;
    std::unordered_map<std::vector<std::uint32_t>, StateId, VectorHash> index;
    std::size_t total_tuples = 0;

    EstimatorBuilder(const LabeledSystem& s, int k_, bool traj, const VerifyOptions& o)
        : sys(s), opts(o), k(k_), trajectory(traj) {
        if (k < 0) throw PreconditionError("K must be nonnegative");
        est.k = k;
        est.trajectory = traj;
        est.record_len = std::uint32_t(k + 1 + (traj ? 1 : 0));
        for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e)
            if (sys.observable[e]) {
                est.obs_events.push_back(e);
                est.obs_names.push_back(sys.automaton.alphabet->name(e));
            }
    }

    StateId intern(std::vector<std::uint32_t> record_set) {
        canonicalize(record_set);
        auto it = index.find(record_set);
        if (it != index.end()) return it->second;
        if (est.states.size() >= opts.max_states)
            throw BudgetExceededError("estimator state budget exceeded", est.states.size());
        total_tuples += record_set.size() / est.record_len;
        if (total_tuples > opts.max_states)
            throw BudgetExceededError("estimator tuple budget exceeded", total_tuples);
        StateId id = StateId(est.states.size());
        est.states.push_back(record_set);
        index.emplace(std::move(record_set), id);
        return id;
    }

    void canonicalize(std::vector<std::uint32_t>& flat) const {
        const std::uint32_t len = est.record_len;
        std::vector<std::vector<std::uint32_t>> records;
        for (std::size_t i = 0; i < flat.size(); i += len)
            records.emplace_back(flat.begin() + i, flat.begin() + i + len);
        std::sort(records.begin(), records.end());
        records.erase(std::unique(records.begin(), records.end()), records.end());
        flat.clear();
        for (const auto& r : records) flat.insert(flat.end(), r.begin(), r.end());
    }
};

bool weak_revealing(const LabeledSystem& sys, const DelayEstimator& est, StateId s) {
    const auto& flat = est.states[s];
    const std::uint32_t len = est.record_len;
    for (int delay = 0; delay <= est.k; ++delay) {
        bool explained = false;
        for (std::size_t i = 0; i < flat.size() && !explained; i += len)
            explained = !sys.state_secret(flat[i + est.k - delay]);
        if (!explained) return true;
    }
    return false;
}

bool strong_revealing(const LabeledSystem& sys, const DelayEstimator& est, StateId s) {
    const auto& flat = est.states[s];
    const std::uint32_t len = est.record_len;
    for (std::size_t i = 0; i < flat.size(); i += len) {
        bool clean = !sys.state_secret(flat[i + est.k]) && (est.k == 0 || flat[i + len - 1] == 0);
        if (clean) return false;
    }
    return true;
}

}  // namespace

DelayEstimator k_delay_state_estimator(const LabeledSystem& sys, int k, const VerifyOptions& opts) {
    sys.validate();
    EstimatorBuilder builder(sys, k, false, opts);
    DelayEstimator& est = builder.est;
    auto ur = unobservable_reach(sys);
    ExploreLimits limits = opts.limits();

    // one-observation image with unobservable closure on both sides
    const Nfa& a = sys.automaton;
    std::vector<std::vector<std::vector<StateId>>> one_obs(est.obs_events.size());
    for (std::size_t oi = 0; oi < est.obs_events.size(); ++oi) {
        one_obs[oi].resize(a.num_states);
        std::vector<bool> hit;
        for (StateId x = 0; x < a.num_states; ++x) {
            hit.assign(a.num_states, false);
            for (StateId w : ur[x])
                for (StateId y : a.targets(w, est.obs_events[oi]))
                    for (StateId z : ur[y]) hit[z] = true;
            for (StateId z = 0; z < a.num_states; ++z)
                if (hit[z]) one_obs[oi][x].push_back(z);
        }
    }

    std::vector<std::uint32_t> init;
    for (StateId x0 : a.initial)
        for (StateId z : ur[x0]) {
            for (int i = 0; i <= k; ++i) init.push_back(z);
        }
    builder.intern(std::move(init));

    std::size_t processed = 0;
    while (processed < est.states.size()) {
        limits.check_deadline();
        StateId s = StateId(processed++);
        est.trans.emplace_back(est.obs_events.size(), kNoState);
        const std::vector<std::uint32_t> flat = est.states[s];  // copy: states grows below
        for (std::size_t oi = 0; oi < est.obs_events.size(); ++oi) {
            std::vector<std::uint32_t> next;
            for (std::size_t i = 0; i < flat.size(); i += est.record_len) {
                StateId last = flat[i + k];
                for (StateId z : one_obs[oi][last]) {
                    for (int j = 1; j <= k; ++j) next.push_back(flat[i + j]);
                    next.push_back(z);
                }
            }
            if (next.empty()) continue;
            est.trans[s][oi] = builder.intern(std::move(next));
        }
    }

    est.opaque = true;
    for (StateId s = 0; s < est.states.size() && est.opaque; ++s)
        est.opaque = !weak_revealing(sys, est, s);
    return est;
}

DelayEstimator k_delay_trajectory_estimator(const LabeledSystem& sys, int k,
                                            const VerifyOptions& opts) {
    sys.validate();
    if (k >= 31) throw PreconditionError("trajectory estimator supports K < 31");
    EstimatorBuilder builder(sys, k, true, opts);
    DelayEstimator& est = builder.est;
    auto freach = flagged_reach(sys);
    ExploreLimits limits = opts.limits();

    // per (observation, source): successor states by connection secrecy flag
    const Nfa& a = sys.automaton;
    std::vector<std::vector<std::array<std::vector<StateId>, 2>>> step(est.obs_events.size());
    for (std::size_t oi = 0; oi < est.obs_events.size(); ++oi) {
        step[oi].resize(a.num_states);
        std::vector<bool> hit;
        for (StateId x = 0; x < a.num_states; ++x) {
            for (int flag = 0; flag < 2; ++flag) {
                hit.assign(a.num_states, false);
                for (StateId w : freach[x][flag])
                    for (StateId z : a.targets(w, est.obs_events[oi])) hit[z] = true;
                for (StateId z = 0; z < a.num_states; ++z)
                    if (hit[z]) step[oi][x][flag].push_back(z);
            }
        }
    }

    std::vector<std::uint32_t> init;
    for (StateId x0 : a.initial) {
        for (int i = 0; i <= k; ++i) init.push_back(x0);
        init.push_back(0);  // no real segments yet
    }
    builder.intern(std::move(init));

    std::size_t processed = 0;
    while (processed < est.states.size()) {
        limits.check_deadline();
        StateId s = StateId(processed++);
        est.trans.emplace_back(est.obs_events.size(), kNoState);
        const std::vector<std::uint32_t> flat = est.states[s];
        for (std::size_t oi = 0; oi < est.obs_events.size(); ++oi) {
            std::vector<std::uint32_t> next;
            for (std::size_t i = 0; i < flat.size(); i += est.record_len) {
                StateId last = flat[i + k];
                std::uint32_t bits = flat[i + est.record_len - 1];
                for (int flag = 0; flag < 2; ++flag) {
                    for (StateId z : step[oi][last][flag]) {
                        for (int j = 1; j <= k; ++j) next.push_back(flat[i + j]);
                        next.push_back(z);
                        std::uint32_t nbits = k == 0 ? 0u
                                                     : ((bits >> 1) |
                                                        (std::uint32_t(flag) << (k - 1)));
                        next.push_back(nbits);
                    }
                }
            }
            if (next.empty()) continue;
            est.trans[s][oi] = builder.intern(std::move(next));
        }
    }

    est.opaque = true;
    for (StateId s = 0; s < est.states.size() && est.opaque; ++s)
        est.opaque = !strong_revealing(sys, est, s);
    return est;
}

// --- correspondence with the secret observer ---------------------------------

bool check_g_map_correspondence(const LabeledSystem& sys, int k, GMap which,
                                const VerifyOptions& opts) {
    DelayEstimator est = which == GMap::Weak ? k_delay_state_estimator(sys, k, opts)
                                             : k_delay_trajectory_estimator(sys, k, opts);

    IoAlphabet io = make_io_alphabet(sys);
    Nfa g = label_transform(sys, io);
    ObservationMask theta = induced_mask(io);
    SpecAutomaton spec = which == GMap::Weak
                             ? build_kstep_spec(io, k, SecretMode::Separate, 2)
                             : build_kstep_spec(io, k, SecretMode::Joint, 1);

    std::vector<std::pair<StateId, StateId>> pairs;
    Nfa prod = product(g, spec.nfa, &pairs);
    Dfa det = determinize(apply_mask(prod, theta), opts.limits());

    // product pair -> observer-subset bit index
    std::map<std::pair<StateId, StateId>, StateId> pair_id;
    for (std::size_t p = 0; p < pairs.size(); ++p) pair_id.emplace(pairs[p], StateId(p));

    // spec states by (block, local) coordinate
    auto spec_state = [&](int block, int local) -> StateId {
        for (StateId q = 0; q < spec.nfa.num_states; ++q)
            if (spec.block_coord[q].first == block && spec.block_coord[q].second == local) return q;
        throw PreconditionError("missing spec block state");
    };
    StateId h_universal = spec_state(0, 0);
    StateId h_wait = which == GMap::Weak ? spec_state(1, 1) : kNoState;
    std::vector<StateId> h_level(k + 1);
    for (int lvl = 0; lvl <= k; ++lvl) h_level[lvl] = spec_state(lvl + 1, 0);

    auto g_image = [&](StateId s) -> std::optional<std::vector<StateId>> {
        std::vector<StateId> image;
        const auto& flat = est.states[s];
        const std::uint32_t len = est.record_len;
        bool missing = false;
        auto push = [&](StateId gq, StateId hq) {
            auto it = pair_id.find({gq, hq});
            if (it == pair_id.end())
                missing = true;  // g claims a pair the product never reaches
            else
                image.push_back(it->second);
        };
        for (std::size_t i = 0; i < flat.size(); i += len) {
            StateId gq = flat[i + k];  // A-state index = G-state index
            push(gq, h_universal);
            if (which == GMap::Weak) {
                push(gq, h_wait);
                for (int delay = 0; delay <= k; ++delay)
                    if (!sys.state_secret(flat[i + k - delay])) push(gq, h_level[delay]);
            } else {
                std::uint32_t bits = k == 0 ? 0u : flat[i + len - 1];
                if (!sys.state_secret(gq))
                    for (int delay = 0; delay <= k; ++delay)
                        if (delay == 0 || (bits >> (k - delay)) == 0) push(gq, h_level[delay]);
            }
        }
        if (missing) return std::nullopt;
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        return image;
    };

    // Gamma symbol per observable Sigma event
    std::vector<EventId> gamma_of_obs;
    for (const std::string& name : est.obs_names) {
        auto id = det.alphabet->find(name);
        if (!id) return false;
        gamma_of_obs.push_back(*id);
    }
    EventId gamma_init = *det.alphabet->find("sigma_init");

    std::deque<std::pair<StateId, StateId>> queue;
    std::map<std::pair<StateId, StateId>, bool> seen;
    StateId det_start = det.step(det.initial, gamma_init);
    if (det.is_dead(det_start)) return est.num_states() == 0;
    queue.push_back({0, det_start});
    seen[{0, det_start}] = true;

    while (!queue.empty()) {
        auto [es, ds] = queue.front();
        queue.pop_front();
        auto image = g_image(es);
        if (!image || *image != det.subset(ds)) return false;
        for (std::size_t oi = 0; oi < est.obs_events.size(); ++oi) {
            StateId en = est.trans[es][oi];
            StateId dn = det.step(ds, gamma_of_obs[oi]);
            if ((en == kNoState) != det.is_dead(dn)) return false;  // language mismatch
            if (en == kNoState) continue;
            if (!seen[{en, dn}]) {
                seen[{en, dn}] = true;
                queue.push_back({en, dn});
            }
        }
    }
    return true;
}

}  // namespace opacity
