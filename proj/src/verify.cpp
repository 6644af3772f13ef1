#include "opacity/verify.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace opacity {

std::string method_name(Method m) {
    switch (m) {
        case Method::Forward: return "forward";
        case Method::Reverse: return "reverse";
        case Method::SecretObserver: return "so";
        case Method::Auto: return "auto";
    }
    return "?";
}

ExploreLimits VerifyOptions::limits() const {
    ExploreLimits lim;
    lim.max_states = max_states;
    if (timeout_ms)
        lim.deadline = std::chrono::steady_clock::now() +
                       std::chrono::microseconds(static_cast<long long>(*timeout_ms * 1000.0));
    return lim;
}

std::string Verdict::witness_string() const {
    if (!witness) return "";
    std::string out;
    for (std::size_t i = 0; i < witness->size(); ++i) {
        if (i) out += " ";
        out += (*witness)[i];
    }
    return out;
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::chrono::nanoseconds elapsed() const {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                    start);
    }
};

std::vector<std::string> symbol_names(const AlphabetPtr& alpha, const std::vector<EventId>& events) {
    std::vector<std::string> out;
    out.reserve(events.size());
    for (EventId e : events) out.push_back(alpha->name(e));
    return out;
}

/// BFS emptiness check of the product of an epsilon-NFA with a DFA over the
/// DFA's alphabet (the non-silent prefix of the NFA's alphabet). Returns the
/// shortest observation string reaching a pair marked on both sides.
std::optional<std::vector<EventId>> masked_pair_search(const Nfa& n, const Dfa& d) {
    const auto silent = n.alphabet->silent();
    const std::uint64_t dn = d.num_states;
    auto key_of = [dn](StateId q, StateId ds) { return std::uint64_t(q) * dn + ds; };

    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, EventId>> parent;
    constexpr EventId kEps = UINT32_MAX;
    constexpr std::uint64_t kRoot = UINT64_MAX;

    std::deque<std::uint64_t> frontier;
    auto visit = [&](StateId q, StateId ds, std::uint64_t from, EventId via,
                     std::deque<std::uint64_t>& out) -> std::optional<std::uint64_t> {
        std::uint64_t key = key_of(q, ds);
        if (parent.count(key)) return std::nullopt;
        parent.emplace(key, std::make_pair(from, via));
        out.push_back(key);
        return key;
    };

    auto reconstruct = [&](std::uint64_t key) {
        std::vector<EventId> events;
        while (parent.at(key).first != kRoot) {
            auto [from, via] = parent.at(key);
            if (via != kEps) events.push_back(via);
            key = from;
        }
        std::reverse(events.begin(), events.end());
        return events;
    };

    auto marked = [&](std::uint64_t key) {
        StateId q = StateId(key / dn), ds = StateId(key % dn);
        return n.is_marked(q) && d.is_marked(ds);
    };

    for (StateId q : n.initial) visit(q, d.initial, kRoot, kEps, frontier);

    while (!frontier.empty()) {
        // close the current layer under silent moves of the NFA side
        std::deque<std::uint64_t> layer;
        while (!frontier.empty()) {
            std::uint64_t key = frontier.front();
            frontier.pop_front();
            layer.push_back(key);
            if (marked(key)) return reconstruct(key);
            if (!silent) continue;
            StateId q = StateId(key / dn), ds = StateId(key % dn);
            for (StateId t : n.targets(q, *silent)) visit(t, ds, key, kEps, frontier);
        }
        // one observation step
        for (std::uint64_t key : layer) {
            StateId q = StateId(key / dn), ds = StateId(key % dn);
            for (EventId e = 0; e < d.num_events; ++e)
                for (StateId t : n.targets(q, e)) visit(t, d.step(ds, e), key, e, frontier);
        }
    }
    return std::nullopt;
}

struct ContainmentParts {
    Nfa masked_g;
    Nfa masked_product;
    std::vector<std::pair<StateId, StateId>> pairs;  // product state -> (g state, spec state)
};

ContainmentParts build_parts(const Nfa& g, const SpecAutomaton& spec, const ObservationMask& mask) {
    require_same_alphabet(g.alphabet, spec.nfa.alphabet, "verify_containment");
    if (!same_alphabet(g.alphabet, mask.domain))
        throw MaskDomainError("mask is not total on the system's alphabet");
    ContainmentParts parts;
    Nfa prod = product(g, spec.nfa, &parts.pairs);
    parts.masked_product = apply_mask(prod, mask);
    parts.masked_g = apply_mask(g, mask);
    return parts;
}

/// Per-subset acceptance test of the secret observer: a state is fine when
/// it has no (marked, ·) pair or some (marked, marked-in-spec) pair.
struct ObserverCheck {
    std::vector<std::uint64_t> any_mask;   // pairs with the g-component marked
    std::vector<std::uint64_t> good_mask;  // pairs additionally marked in the spec

    ObserverCheck(const Dfa& det, const std::vector<std::pair<StateId, StateId>>& pairs,
                  const Nfa& g, const std::vector<StateId>& spec_marks) {
        any_mask.assign(det.words_per_state, 0);
        good_mask.assign(det.words_per_state, 0);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (!g.is_marked(pairs[p].first)) continue;
            any_mask[p >> 6] |= 1ull << (p & 63);
            if (std::binary_search(spec_marks.begin(), spec_marks.end(), pairs[p].second))
                good_mask[p >> 6] |= 1ull << (p & 63);
        }
    }

    bool violates(const Dfa& det, StateId subset) const {
        const std::uint64_t* w = det.subset_words(subset);
        bool any = false, good = false;
        for (std::uint32_t i = 0; i < det.words_per_state; ++i) {
            any |= (w[i] & any_mask[i]) != 0;
            good |= (w[i] & good_mask[i]) != 0;
        }
        return any && !good;
    }
};

}  // namespace

Verdict verify_containment(const Nfa& g, const SpecAutomaton& spec, const ObservationMask& mask,
                           Method method, const VerifyOptions& opts) {
    Timer timer;
    if (method == Method::Auto) method = spec.universal ? Method::SecretObserver : Method::Forward;

    ContainmentParts parts = build_parts(g, spec, mask);
    ExploreLimits limits = opts.limits();

    Verdict verdict;
    verdict.stats.method = method;

    if (method == Method::SecretObserver) {
        if (!spec.universal)
            throw MethodError("secret observer requires a universal nonsecret spec");
        Dfa det = determinize(parts.masked_product, limits);
        verdict.stats.verifier_states = det.num_live_states();
        ObserverCheck check(det, parts.pairs, g, spec.nfa.marked);
        verdict.opaque = true;
        for (StateId s = 0; s < det.num_states; ++s) {
            if (det.is_dead(s)) continue;
            if (check.violates(det, s)) {
                verdict.opaque = false;
                verdict.witness = symbol_names(det.alphabet, det.access_string(s));
                break;
            }
        }
    } else if (method == Method::Forward) {
        Dfa det = determinize(parts.masked_product, limits);
        verdict.stats.verifier_states = det.num_live_states();
        AlphabetPtr gamma = det.alphabet;
        auto witness = masked_pair_search(parts.masked_g, complement(std::move(det)));
        verdict.opaque = !witness.has_value();
        if (witness) verdict.witness = symbol_names(gamma, *witness);
    } else {
        Nfa reversed_product = reverse(parts.masked_product);
        Dfa det = determinize(reversed_product, limits);
        verdict.stats.verifier_states = det.num_live_states();
        AlphabetPtr gamma = det.alphabet;
        auto witness = masked_pair_search(reverse(parts.masked_g), complement(std::move(det)));
        verdict.opaque = !witness.has_value();
        if (witness) {
            std::reverse(witness->begin(), witness->end());
            verdict.witness = symbol_names(gamma, *witness);
        }
    }
    verdict.stats.elapsed = timer.elapsed();
    return verdict;
}

namespace {

struct StatePipeline {
    IoAlphabet io;
    Nfa g;
    ObservationMask theta;

    explicit StatePipeline(const LabeledSystem& sys) : io(make_io_alphabet(sys)) {
        g = label_transform(sys, io);
        theta = induced_mask(io);
    }
};

}  // namespace

Verdict verify_separate_kstep_so(const LabeledSystem& sys, int k, int secret_type,
                                 const VerifyOptions& opts) {
    Timer timer;
    StatePipeline pipe(sys);
    SpecAutomaton spec = build_kstep_spec(pipe.io, k, SecretMode::Separate, secret_type);
    ContainmentParts parts = build_parts(pipe.g, spec, pipe.theta);
    Dfa det = determinize(parts.masked_product, opts.limits());

    Verdict verdict;
    verdict.stats.method = Method::SecretObserver;
    verdict.stats.verifier_states = det.num_live_states();
    verdict.opaque = true;
    for (int level = 0; level <= k && verdict.opaque; ++level) {
        ObserverCheck check(det, parts.pairs, pipe.g, spec.level_marks[level]);
        for (StateId s = 0; s < det.num_states; ++s) {
            if (det.is_dead(s)) continue;
            if (check.violates(det, s)) {
                verdict.opaque = false;
                verdict.violated_level = level;
                verdict.witness = symbol_names(det.alphabet, det.access_string(s));
                break;
            }
        }
    }
    verdict.stats.elapsed = timer.elapsed();
    return verdict;
}

Verdict verify_separate_kstep_ext(const LabeledSystem& sys, int k, int secret_type, Method method,
                                  const VerifyOptions& opts) {
    if (!check_observation_extendable(sys))
        throw NotExtendableError("system is not observation extendable; extend it first");
    Timer timer;
    StatePipeline pipe(sys);
    SpecAutomaton spec = build_kstep_spec(pipe.io, k, SecretMode::Separate, secret_type);
    Verdict verdict = verify_containment(pipe.g, spec, pipe.theta, method, opts);
    verdict.stats.elapsed = timer.elapsed();
    return verdict;
}

Verdict verify_infinite_separate(const LabeledSystem& sys, int secret_type,
                                 const VerifyOptions& opts) {
    // equivalent to K-step opacity once K reaches 2^n
    unsigned n = sys.num_states();
    if (n >= 63) {
        BudgetExceededError err("separate infinite-step: 2^n exceeds any feasible K", 0);
        err.required_k = ~0ull;
        throw err;
    }
    unsigned long long k = 1ull << n;
    if (k > opts.max_separate_infinite_k) {
        BudgetExceededError err(
            "separate infinite-step needs K = 2^" + std::to_string(n) + " = " + std::to_string(k) +
                ", above the configured cap " + std::to_string(opts.max_separate_infinite_k),
            0);
        err.required_k = k;
        throw err;
    }
    return verify_separate_kstep_so(sys, int(k), secret_type, opts);
}

Verdict verify_state_based(const LabeledSystem& sys, const OpacityNotion& notion, Method method,
                           const VerifyOptions& opts) {
    if (notion.kind == NotionKind::KStep && notion.mode == SecretMode::Separate) {
        if (method == Method::Auto || method == Method::SecretObserver)
            return verify_separate_kstep_so(sys, notion.k, notion.secret_type, opts);
        if (check_observation_extendable(sys))
            return verify_separate_kstep_ext(sys, notion.k, notion.secret_type, method, opts);
        // verdict-preserving self-loop extension; the witness then lives in
        // the extended observation space, so it is not reported
        Verdict verdict = verify_separate_kstep_ext(make_observation_extendable(sys), notion.k,
                                                    notion.secret_type, method, opts);
        verdict.witness.reset();
        return verdict;
    }
    if (notion.kind == NotionKind::InfiniteStep && notion.mode == SecretMode::Separate)
        return verify_infinite_separate(sys, notion.secret_type, opts);

    Timer timer;
    StatePipeline pipe(sys);
    SpecAutomaton spec;
    switch (notion.kind) {
        case NotionKind::CurrentState: spec = build_cso_spec(pipe.io); break;
        case NotionKind::InitialState: spec = build_iso_spec(pipe.io); break;
        case NotionKind::KStep:
            spec = build_kstep_spec(pipe.io, notion.k, SecretMode::Joint, notion.secret_type);
            break;
        case NotionKind::InfiniteStep:
            spec = build_infinite_joint_spec(pipe.io, notion.secret_type);
            if (method == Method::Auto) method = Method::Forward;
            break;
    }
    Verdict verdict = verify_containment(pipe.g, spec, pipe.theta, method, opts);
    verdict.stats.elapsed = timer.elapsed();
    return verdict;
}

bool check_observation_extendable(const LabeledSystem& sys) {
    const Nfa& a = sys.automaton;
    std::vector<bool> has_observable(a.num_states, false);
    for (StateId x = 0; x < a.num_states; ++x)
        for (EventId e = 0; e < a.alphabet->size(); ++e)
            if (sys.observable[e] && !a.targets(x, e).empty()) has_observable[x] = true;

    // states from which an observable step is reachable via unobservable moves
    std::vector<bool> good = has_observable;
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId x = 0; x < a.num_states; ++x) {
            if (good[x]) continue;
            for (EventId e = 0; e < a.alphabet->size() && !good[x]; ++e) {
                if (sys.observable[e]) continue;
                for (StateId t : a.targets(x, e)) {
                    if (good[t]) {
                        good[x] = true;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    // every reachable state must be good
    std::vector<bool> seen(a.num_states, false);
    std::deque<StateId> queue(a.initial.begin(), a.initial.end());
    for (StateId x : a.initial) seen[x] = true;
    while (!queue.empty()) {
        StateId x = queue.front();
        queue.pop_front();
        if (!good[x]) return false;
        for (EventId e = 0; e < a.alphabet->size(); ++e)
            for (StateId t : a.targets(x, e))
                if (!seen[t]) {
                    seen[t] = true;
                    queue.push_back(t);
                }
    }
    return true;
}

LabeledSystem make_observation_extendable(const LabeledSystem& sys) {
    std::vector<EventSym> events;
    for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e)
        events.push_back(sys.automaton.alphabet->event(e));
    std::string ext_name = "sigma_ext";
    while (sys.automaton.alphabet->find(ext_name)) ext_name += "_";
    events.push_back({ext_name, false});

    LabeledSystem out = sys;
    Nfa a(Alphabet::make(std::move(events)));
    for (StateId x = 0; x < sys.automaton.num_states; ++x) a.add_state(sys.automaton.name_of(x));
    for (StateId x = 0; x < sys.automaton.num_states; ++x)
        for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e)
            for (StateId t : sys.automaton.targets(x, e)) a.add_transition(x, e, t);
    EventId ext = EventId(a.alphabet->size() - 1);
    for (StateId x = 0; x < a.num_states; ++x) a.add_transition(x, ext, x);
    a.set_initial(sys.automaton.initial);
    out.automaton = std::move(a);
    out.observable = sys.observable;
    out.observable.push_back(true);
    return out;
}

}  // namespace opacity
