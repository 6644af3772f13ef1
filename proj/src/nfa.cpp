#include "opacity/nfa.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace opacity {

const std::vector<StateId> Nfa::kEmpty{};

void ExploreLimits::check_deadline() const {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
        throw TimeoutError("exploration deadline exceeded");
}

// --- Nfa basics -------------------------------------------------------------

StateId Nfa::add_state(std::string name) {
    next_.emplace_back();
    if (!name.empty() || !state_names.empty()) {
        state_names.resize(num_states);
        state_names.push_back(std::move(name));
    }
    return num_states++;
}

void Nfa::add_transition(StateId src, EventId event, StateId dst) {
    if (src >= num_states || dst >= num_states)
        throw PreconditionError("transition endpoint out of range");
    if (event >= alphabet->size()) throw PreconditionError("event id out of range");
    auto& row = next_[src];
    if (row.size() <= event) row.resize(alphabet->size());
    auto& targets = row[event];
    auto it = std::lower_bound(targets.begin(), targets.end(), dst);
    if (it == targets.end() || *it != dst) targets.insert(it, dst);
}

const std::vector<StateId>& Nfa::targets(StateId src, EventId event) const {
    const auto& row = next_[src];
    if (event >= row.size()) return kEmpty;
    return row[event];
}

void Nfa::set_initial(std::vector<StateId> states) {
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    initial = std::move(states);
}

void Nfa::set_marked(std::vector<StateId> states) {
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    marked = std::move(states);
}

bool Nfa::is_initial(StateId q) const {
    return std::binary_search(initial.begin(), initial.end(), q);
}

bool Nfa::is_marked(StateId q) const {
    return std::binary_search(marked.begin(), marked.end(), q);
}

bool Nfa::has_silent_transitions() const {
    auto silent = alphabet->silent();
    if (!silent) return false;
    for (StateId q = 0; q < num_states; ++q)
        if (!targets(q, *silent).empty()) return true;
    return false;
}

std::size_t Nfa::num_transitions() const {
    std::size_t count = 0;
    for (const auto& row : next_)
        for (const auto& targets : row) count += targets.size();
    return count;
}

const std::string& Nfa::name_of(StateId q) const {
    static const std::string empty;
    if (q < state_names.size()) return state_names[q];
    return empty;
}

void Nfa::validate() const {
    if (!alphabet) throw PreconditionError("automaton has no alphabet");
    auto check_set = [&](const std::vector<StateId>& set, const char* what) {
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (set[i] >= num_states) throw PreconditionError(std::string(what) + " state out of range");
            if (i > 0 && set[i - 1] >= set[i]) throw PreconditionError(std::string(what) + " set not sorted unique");
        }
    };
    check_set(initial, "initial");
    check_set(marked, "marked");
    for (StateId q = 0; q < num_states; ++q) {
        for (EventId e = 0; e < alphabet->size(); ++e) {
            const auto& ts = targets(q, e);
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (ts[i] >= num_states) throw PreconditionError("transition target out of range");
                if (i > 0 && ts[i - 1] >= ts[i]) throw PreconditionError("target set not sorted unique");
            }
        }
    }
}

// --- product ----------------------------------------------------------------

namespace {

void require_no_silent_use(const Nfa& g, const char* op) {
    if (g.has_silent_transitions())
        throw PreconditionError(std::string(op) + ": silent transitions are not synchronized; apply masks after products");
}

std::string pair_name(const Nfa& g, const Nfa& h, StateId a, StateId b) {
    std::string na = g.name_of(a).empty() ? std::to_string(a) : g.name_of(a);
    std::string nb = h.name_of(b).empty() ? std::to_string(b) : h.name_of(b);
    return "(" + na + "," + nb + ")";
}

}  // namespace

Nfa product(const Nfa& g, const Nfa& h) { return product(g, h, nullptr); }

Nfa product(const Nfa& g, const Nfa& h, std::vector<std::pair<StateId, StateId>>* pair_of_state) {
    require_same_alphabet(g.alphabet, h.alphabet, "product");
    require_no_silent_use(g, "product");
    require_no_silent_use(h, "product");

    Nfa result(g.alphabet);
    std::unordered_map<std::uint64_t, StateId> ids;
    std::deque<std::pair<StateId, StateId>> queue;
    bool with_names = !g.state_names.empty() || !h.state_names.empty();

    auto intern = [&](StateId a, StateId b) {
        std::uint64_t key = (std::uint64_t(a) << 32) | b;
        auto [it, inserted] = ids.emplace(key, result.num_states);
        if (inserted) {
            result.add_state(with_names ? pair_name(g, h, a, b) : std::string());
            if (pair_of_state) pair_of_state->emplace_back(a, b);
            queue.emplace_back(a, b);
        }
        return it->second;
    };

    std::vector<StateId> init;
    for (StateId a : g.initial)
        for (StateId b : h.initial) init.push_back(intern(a, b));
    result.set_initial(std::move(init));

    std::vector<StateId> marked;
    while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop_front();
        StateId id = ids[(std::uint64_t(a) << 32) | b];
        if (g.is_marked(a) && h.is_marked(b)) marked.push_back(id);
        for (EventId e = 0; e < g.alphabet->size(); ++e) {
            const auto& ta = g.targets(a, e);
            if (ta.empty()) continue;
            const auto& tb = h.targets(b, e);
            for (StateId a2 : ta)
                for (StateId b2 : tb) result.add_transition(id, e, intern(a2, b2));
        }
    }
    result.set_marked(std::move(marked));
    return result;
}

// --- determinization --------------------------------------------------------

namespace {

struct BitsetOps {
    std::uint32_t words;

    void clear(std::uint64_t* w) const { std::fill(w, w + words, 0); }
    void set(std::uint64_t* w, StateId q) const { w[q >> 6] |= 1ull << (q & 63); }
    bool test(const std::uint64_t* w, StateId q) const { return (w[q >> 6] >> (q & 63)) & 1u; }
    void or_into(std::uint64_t* dst, const std::uint64_t* src) const {
        for (std::uint32_t i = 0; i < words; ++i) dst[i] |= src[i];
    }
    bool empty(const std::uint64_t* w) const {
        for (std::uint32_t i = 0; i < words; ++i)
            if (w[i]) return false;
        return true;
    }
    bool intersects(const std::uint64_t* a, const std::uint64_t* b) const {
        for (std::uint32_t i = 0; i < words; ++i)
            if (a[i] & b[i]) return true;
        return false;
    }
    std::uint64_t hash(const std::uint64_t* w) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::uint32_t i = 0; i < words; ++i) {
            h ^= w[i];
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return h;
    }
    template <typename Fn>
    void for_each(const std::uint64_t* w, Fn&& fn) const {
        for (std::uint32_t i = 0; i < words; ++i) {
            std::uint64_t bits = w[i];
            while (bits) {
                fn(StateId(i * 64 + __builtin_ctzll(bits)));
                bits &= bits - 1;
            }
        }
    }
};

/// Interns bit subsets in one growing arena; ids are discovery-ordered.
class SubsetIndex {
  public:
    SubsetIndex(std::uint32_t words, std::size_t max_states) : ops_{words}, max_states_(max_states) {}

    std::pair<StateId, bool> find_or_insert(const std::uint64_t* scratch) {
        std::uint64_t h = ops_.hash(scratch);
        auto range = map_.equal_range(h);
        for (auto it = range.first; it != range.second; ++it) {
            const std::uint64_t* stored = arena_.data() + std::size_t(it->second) * ops_.words;
            if (std::equal(stored, stored + ops_.words, scratch)) return {it->second, false};
        }
        if (size_ >= max_states_)
            throw BudgetExceededError("state budget exceeded during subset construction", size_);
        StateId id = StateId(size_++);
        arena_.insert(arena_.end(), scratch, scratch + ops_.words);
        map_.emplace(h, id);
        return {id, true};
    }

    std::size_t size() const { return size_; }
    const std::uint64_t* words_of(StateId id) const { return arena_.data() + std::size_t(id) * ops_.words; }
    std::vector<std::uint64_t> take_arena() && { return std::move(arena_); }

  private:
    BitsetOps ops_;
    std::size_t max_states_;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> arena_;
    std::unordered_multimap<std::uint64_t, StateId> map_;
};

/// Epsilon-closure masks, one per state. Identity when there is no silent
/// symbol in play.
std::vector<std::uint64_t> silent_closures(const Nfa& g, const BitsetOps& ops) {
    const StateId n = g.num_states;
    std::vector<std::uint64_t> closure(std::size_t(n) * ops.words, 0);
    auto silent = g.alphabet->silent();
    std::vector<StateId> stack;
    for (StateId q = 0; q < n; ++q) {
        std::uint64_t* row = closure.data() + std::size_t(q) * ops.words;
        ops.set(row, q);
        if (!silent) continue;
        stack.assign(1, q);
        while (!stack.empty()) {
            StateId cur = stack.back();
            stack.pop_back();
            for (StateId next : g.targets(cur, *silent)) {
                if (!ops.test(row, next)) {
                    ops.set(row, next);
                    stack.push_back(next);
                }
            }
        }
    }
    return closure;
}

}  // namespace

Dfa determinize(const Nfa& g, const ExploreLimits& limits) {
    const StateId n = g.num_states;
    BitsetOps ops{std::max<std::uint32_t>(1, (n + 63) / 64)};

    // output alphabet: drop the silent symbol
    std::vector<EventSym> out_events;
    std::vector<EventId> obs;  // original event ids, in order
    for (EventId e = 0; e < g.alphabet->size(); ++e) {
        if (g.alphabet->is_silent(e)) continue;
        out_events.push_back({g.alphabet->name(e), false});
        obs.push_back(e);
    }

    Dfa dfa;
    dfa.alphabet = Alphabet::make(std::move(out_events));
    dfa.num_events = std::uint32_t(obs.size());
    dfa.origin_states = n;
    dfa.words_per_state = ops.words;

    std::vector<std::uint64_t> closure = silent_closures(g, ops);

    // move-and-close mask per (event, state)
    std::vector<std::uint64_t> succ(std::size_t(obs.size()) * n * ops.words, 0);
    for (std::size_t ei = 0; ei < obs.size(); ++ei) {
        for (StateId q = 0; q < n; ++q) {
            std::uint64_t* row = succ.data() + (ei * n + q) * ops.words;
            for (StateId t : g.targets(q, obs[ei]))
                ops.or_into(row, closure.data() + std::size_t(t) * ops.words);
        }
    }

    std::vector<std::uint64_t> markmask(ops.words, 0);
    for (StateId m : g.marked) ops.set(markmask.data(), m);

    SubsetIndex index(ops.words, limits.max_states);
    std::vector<std::uint64_t> scratch(ops.words, 0);

    ops.clear(scratch.data());
    for (StateId q : g.initial) ops.or_into(scratch.data(), closure.data() + std::size_t(q) * ops.words);
    auto [init_id, fresh] = index.find_or_insert(scratch.data());
    (void)fresh;
    dfa.initial = init_id;
    dfa.parent.push_back({init_id, 0});

    constexpr StateId kPendingDead = kNoState;
    std::size_t processed = 0;
    while (processed < index.size()) {
        if ((processed & 1023) == 0) limits.check_deadline();
        StateId id = StateId(processed++);
        dfa.trans.resize(std::size_t(processed) * obs.size(), kPendingDead);
        for (std::size_t ei = 0; ei < obs.size(); ++ei) {
            ops.clear(scratch.data());
            ops.for_each(index.words_of(id), [&](StateId q) {
                ops.or_into(scratch.data(), succ.data() + (ei * n + q) * ops.words);
            });
            if (ops.empty(scratch.data())) continue;  // resolved to the dead sink below
            auto [next_id, inserted] = index.find_or_insert(scratch.data());
            if (inserted) dfa.parent.push_back({id, EventId(ei)});
            dfa.trans[std::size_t(id) * obs.size() + ei] = next_id;
        }
    }

    // materialize the dead sink and resolve pending transitions
    StateId dead = StateId(index.size());
    dfa.dead = dead;
    dfa.num_states = dead + 1;
    dfa.trans.resize(std::size_t(dfa.num_states) * dfa.num_events, kPendingDead);
    for (auto& t : dfa.trans)
        if (t == kPendingDead) t = dead;
    dfa.parent.push_back({dead, 0});

    dfa.subset_bits = std::move(index).take_arena();
    dfa.subset_bits.resize(std::size_t(dfa.num_states) * ops.words, 0);

    dfa.marked.assign(dfa.num_states, false);
    for (StateId q = 0; q + 1 < dfa.num_states; ++q)
        dfa.marked[q] = ops.intersects(dfa.subset_words(q), markmask.data());
    return dfa;
}

std::vector<StateId> Dfa::subset(StateId q) const {
    std::vector<StateId> out;
    const std::uint64_t* w = subset_words(q);
    for (std::uint32_t i = 0; i < words_per_state; ++i) {
        std::uint64_t bits = w[i];
        while (bits) {
            out.push_back(StateId(i * 64 + __builtin_ctzll(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

std::vector<EventId> Dfa::access_string(StateId q) const {
    std::vector<EventId> events;
    while (q != initial) {
        auto [pred, e] = parent[q];
        if (pred == q) break;  // dead sink or detached state
        events.push_back(e);
        q = pred;
    }
    std::reverse(events.begin(), events.end());
    return events;
}

bool Dfa::is_complete() const {
    if (trans.size() != std::size_t(num_states) * num_events) return false;
    for (StateId t : trans)
        if (t >= num_states) return false;
    return true;
}

Nfa Dfa::as_nfa() const {
    Nfa out(alphabet);
    for (StateId q = 0; q < num_states; ++q) out.add_state();
    for (StateId q = 0; q < num_states; ++q)
        for (EventId e = 0; e < num_events; ++e) out.add_transition(q, e, step(q, e));
    out.set_initial({initial});
    std::vector<StateId> marks;
    for (StateId q = 0; q < num_states; ++q)
        if (marked[q]) marks.push_back(q);
    out.set_marked(std::move(marks));
    return out;
}

Dfa complement(Dfa d) {
    if (!d.is_complete())
        throw NotCompleteError("complement requires a complete DFA");
    for (StateId q = 0; q < d.num_states; ++q) d.marked[q] = !d.marked[q];
    return d;
}

// --- reversal ----------------------------------------------------------------

Nfa reverse(const Nfa& g) {
    Nfa out(g.alphabet);
    for (StateId q = 0; q < g.num_states; ++q) out.add_state(g.name_of(q));
    for (StateId q = 0; q < g.num_states; ++q)
        for (EventId e = 0; e < g.alphabet->size(); ++e)
            for (StateId t : g.targets(q, e)) out.add_transition(t, e, q);
    out.set_initial(g.marked);
    out.set_marked(g.initial);
    return out;
}

// --- concatenation merge ------------------------------------------------------

Nfa merge_concatenate(const Nfa& h1, const Nfa& h2) { return merge_concatenate(h1, h2, nullptr); }

Nfa merge_concatenate(const Nfa& h1, const Nfa& h2, std::vector<StateId>* h2_map) {
    require_same_alphabet(h1.alphabet, h2.alphabet, "merge_concatenate");
    for (StateId q : h2.initial)
        if (h2.is_marked(q))
            throw PreconditionError("merge_concatenate: second operand has an initial marked state");
    for (StateId q = 0; q < h2.num_states; ++q)
        for (EventId e = 0; e < h2.alphabet->size(); ++e)
            for (StateId t : h2.targets(q, e))
                if (h2.is_initial(t))
                    throw PreconditionError("merge_concatenate: second operand re-enters an initial state");

    Nfa out(h1.alphabet);
    for (StateId q = 0; q < h1.num_states; ++q) out.add_state(h1.name_of(q));

    std::vector<StateId> map2(h2.num_states, kNoState);
    for (StateId q = 0; q < h2.num_states; ++q)
        if (!h2.is_initial(q)) map2[q] = out.add_state(h2.name_of(q));

    // h1 transitions survive unchanged; marked h1 states also inherit the
    // outgoing transitions of h2's initial states
    for (StateId q = 0; q < h1.num_states; ++q)
        for (EventId e = 0; e < h1.alphabet->size(); ++e)
            for (StateId t : h1.targets(q, e)) out.add_transition(q, e, t);
    for (StateId q : h1.marked)
        for (EventId e = 0; e < h1.alphabet->size(); ++e)
            for (StateId q2 : h2.initial)
                for (StateId t : h2.targets(q2, e)) out.add_transition(q, e, map2[t]);
    for (StateId q = 0; q < h2.num_states; ++q) {
        if (h2.is_initial(q)) continue;
        for (EventId e = 0; e < h2.alphabet->size(); ++e)
            for (StateId t : h2.targets(q, e)) out.add_transition(map2[q], e, map2[t]);
    }

    std::vector<StateId> init(h1.initial);
    init.insert(init.end(), h1.marked.begin(), h1.marked.end());
    out.set_initial(std::move(init));

    std::vector<StateId> marks;
    for (StateId q : h2.marked) marks.push_back(map2[q]);
    out.set_marked(std::move(marks));

    if (h2_map) *h2_map = std::move(map2);
    return out;
}

// --- bounded enumeration ------------------------------------------------------

std::set<std::vector<EventId>> enumerate_marked(const Nfa& g, std::size_t max_len,
                                                const ExploreLimits& limits) {
    BitsetOps ops{std::max<std::uint32_t>(1, (g.num_states + 63) / 64)};
    std::vector<std::uint64_t> closure = silent_closures(g, ops);
    std::vector<std::uint64_t> markmask(ops.words, 0);
    for (StateId m : g.marked) ops.set(markmask.data(), m);

    std::vector<EventId> obs;
    for (EventId e = 0; e < g.alphabet->size(); ++e)
        if (!g.alphabet->is_silent(e)) obs.push_back(e);

    struct Node {
        std::vector<EventId> str;
        std::vector<std::uint64_t> bits;
    };
    std::set<std::vector<EventId>> out;
    std::deque<Node> queue;

    Node root{{}, std::vector<std::uint64_t>(ops.words, 0)};
    for (StateId q : g.initial) ops.or_into(root.bits.data(), closure.data() + std::size_t(q) * ops.words);
    queue.push_back(std::move(root));

    std::size_t visited = 0;
    std::vector<std::uint64_t> scratch(ops.words);
    while (!queue.empty()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        if (++visited > limits.max_states)
            throw BudgetExceededError("enumeration frontier exceeded budget", visited);
        if (ops.intersects(node.bits.data(), markmask.data())) out.insert(node.str);
        if (node.str.size() == max_len) continue;
        for (EventId e : obs) {
            ops.clear(scratch.data());
            ops.for_each(node.bits.data(), [&](StateId q) {
                for (StateId t : g.targets(q, e))
                    ops.or_into(scratch.data(), closure.data() + std::size_t(t) * ops.words);
            });
            if (ops.empty(scratch.data())) continue;
            Node next;
            next.str = node.str;
            next.str.push_back(e);
            next.bits = scratch;
            queue.push_back(std::move(next));
        }
    }
    return out;
}

// --- reachability -------------------------------------------------------------

std::optional<std::vector<EventId>> check_reachable_predicate(
    const Nfa& g, const std::function<bool(StateId)>& pred) {
    std::vector<std::pair<StateId, EventId>> parent(g.num_states, {kNoState, 0});
    std::deque<StateId> queue;
    std::vector<bool> seen(g.num_states, false);
    for (StateId q : g.initial) {
        seen[q] = true;
        parent[q] = {q, 0};
        queue.push_back(q);
    }
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop_front();
        if (pred(q)) {
            std::vector<EventId> events;
            StateId cur = q;
            while (parent[cur].first != cur) {
                events.push_back(parent[cur].second);
                cur = parent[cur].first;
            }
            std::reverse(events.begin(), events.end());
            return events;
        }
        for (EventId e = 0; e < g.alphabet->size(); ++e) {
            for (StateId t : g.targets(q, e)) {
                if (!seen[t]) {
                    seen[t] = true;
                    parent[t] = {q, e};
                    queue.push_back(t);
                }
            }
        }
    }
    return std::nullopt;
}

bool is_universal(const Nfa& g, const ExploreLimits& limits) {
    BitsetOps ops{std::max<std::uint32_t>(1, (g.num_states + 63) / 64)};
    std::vector<std::uint64_t> closure = silent_closures(g, ops);

    std::vector<EventId> obs;
    for (EventId e = 0; e < g.alphabet->size(); ++e)
        if (!g.alphabet->is_silent(e)) obs.push_back(e);

    SubsetIndex index(ops.words, limits.max_states);
    std::vector<std::uint64_t> scratch(ops.words, 0);
    for (StateId q : g.initial) ops.or_into(scratch.data(), closure.data() + std::size_t(q) * ops.words);
    if (ops.empty(scratch.data())) return false;
    index.find_or_insert(scratch.data());

    std::size_t processed = 0;
    while (processed < index.size()) {
        limits.check_deadline();
        StateId id = StateId(processed++);
        for (EventId e : obs) {
            ops.clear(scratch.data());
            ops.for_each(index.words_of(id), [&](StateId q) {
                for (StateId t : g.targets(q, e))
                    ops.or_into(scratch.data(), closure.data() + std::size_t(t) * ops.words);
            });
            if (ops.empty(scratch.data())) return false;
            index.find_or_insert(scratch.data());
        }
    }
    return true;
}

std::string format_strings(const Nfa& g, const std::set<std::vector<EventId>>& strings) {
    std::ostringstream out;
    out << "{";
    bool first_str = true;
    for (const auto& s : strings) {
        if (!first_str) out << ", ";
        first_str = false;
        if (s.empty()) out << "eps";
        for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << g.alphabet->name(s[i]);
    }
    out << "}";
    return out.str();
}

}  // namespace opacity
