#include "opacity/moore.hpp"

#include <algorithm>
#include <map>

namespace opacity {

std::vector<StateId> LabeledSystem::secret_states() const {
    std::vector<StateId> out;
    for (StateId x = 0; x < num_states(); ++x)
        if (state_secret(x)) out.push_back(x);
    return out;
}

void LabeledSystem::validate() const {
    automaton.validate();
    if (label.size() != num_states()) throw PreconditionError("every state needs a label");
    for (auto l : label)
        if (l >= label_names.size()) throw PreconditionError("label id out of range");
    if (observable.size() != automaton.alphabet->size())
        throw PreconditionError("observability flags must cover the alphabet");
    if (automaton.alphabet->silent())
        throw PreconditionError("system alphabets have no silent symbol");
}

LabeledSystem make_labeled_system(Nfa automaton, const std::vector<StateId>& secret,
                                  const std::vector<bool>& observable, std::string name) {
    LabeledSystem sys;
    sys.name = std::move(name);
    sys.automaton = std::move(automaton);
    sys.label_names = {"NS", "S"};
    sys.label.assign(sys.num_states(), 0);
    for (StateId x : secret) {
        if (x >= sys.num_states()) throw PreconditionError("secret state out of range");
        sys.label[x] = 1;
    }
    sys.observable = observable;
    sys.validate();
    return sys;
}

bool structurally_equal(const LabeledSystem& a, const LabeledSystem& b) {
    if (a.num_states() != b.num_states()) return false;
    if (!same_alphabet(a.automaton.alphabet, b.automaton.alphabet)) return false;
    if (a.observable != b.observable) return false;
    if (a.automaton.initial != b.automaton.initial) return false;
    for (StateId x = 0; x < a.num_states(); ++x)
        if (a.label_names[a.label[x]] != b.label_names[b.label[x]]) return false;
    for (StateId x = 0; x < a.num_states(); ++x)
        for (EventId e = 0; e < a.automaton.alphabet->size(); ++e)
            if (a.automaton.targets(x, e) != b.automaton.targets(x, e)) return false;
    return true;
}

std::vector<EventId> IoAlphabet::select(int secret_flag, int observable_flag) const {
    std::vector<EventId> out;
    for (EventId e = 0; e < events->size(); ++e) {
        if (secret_flag >= 0 && secret[e] != (secret_flag != 0)) continue;
        if (observable_flag >= 0 && observable[e] != (observable_flag != 0)) continue;
        out.push_back(e);
    }
    return out;
}

IoAlphabet make_io_alphabet(const LabeledSystem& sys) {
    sys.validate();
    IoAlphabet io;
    io.label_names = sys.label_names;
    io.input_observable = sys.observable;
    for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e)
        io.input_names.push_back(sys.automaton.alphabet->name(e));

    // realized pairs only, keeping |E| <= |transitions| + |A|
    std::map<std::pair<std::uint32_t, std::uint32_t>, bool> seen;
    for (StateId x0 : sys.automaton.initial) seen.emplace(std::make_pair(IoAlphabet::kInit, sys.label[x0]), true);
    for (StateId x = 0; x < sys.num_states(); ++x)
        for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e)
            for (StateId t : sys.automaton.targets(x, e)) seen.emplace(std::make_pair(e, sys.label[t]), true);

    std::vector<EventSym> events;
    for (const auto& [part, unused] : seen) {
        (void)unused;
        io.parts.push_back(part);
        bool init_pair = part.first == IoAlphabet::kInit;
        io.secret.push_back(sys.label_names[part.second] == "S");
        io.observable.push_back(init_pair || sys.observable[part.first]);
        std::string input = init_pair ? "sigma_init" : io.input_names[part.first];
        events.push_back({"(" + input + "," + sys.label_names[part.second] + ")", false});
    }
    io.events = Alphabet::make(std::move(events));
    return io;
}

Nfa label_transform(const LabeledSystem& sys, const IoAlphabet& io) {
    Nfa g(io.events);
    for (StateId x = 0; x < sys.num_states(); ++x) {
        const std::string& n = sys.automaton.name_of(x);
        g.add_state(n.empty() ? std::to_string(x) : n);
    }
    StateId x_init = g.add_state("x_init");

    // pair id lookup: (input, label) -> event
    std::map<std::pair<std::uint32_t, std::uint32_t>, EventId> pair_id;
    for (EventId e = 0; e < io.events->size(); ++e) pair_id.emplace(io.parts[e], e);

    for (StateId x0 : sys.automaton.initial)
        g.add_transition(x_init, pair_id.at({IoAlphabet::kInit, sys.label[x0]}), x0);
    for (StateId x = 0; x < sys.num_states(); ++x)
        for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e)
            for (StateId t : sys.automaton.targets(x, e))
                g.add_transition(x, pair_id.at({e, sys.label[t]}), t);

    g.set_initial({x_init});
    std::vector<StateId> marks(sys.num_states());
    for (StateId x = 0; x < sys.num_states(); ++x) marks[x] = x;
    g.set_marked(std::move(marks));
    return g;
}

ObservationMask induced_mask(const IoAlphabet& io) {
    ObservationMask mask;
    mask.domain = io.events;

    // Gamma = {sigma_init} ∪ Sigma_o, then the silent symbol last
    std::vector<EventSym> image_events{{"sigma_init", false}};
    std::map<std::string, EventId> image_id{{"sigma_init", 0}};
    for (std::size_t e = 0; e < io.input_names.size(); ++e) {
        if (!io.input_observable[e]) continue;
        image_id.emplace(io.input_names[e], EventId(image_events.size()));
        image_events.push_back({io.input_names[e], false});
    }
    EventId silent = EventId(image_events.size());
    image_events.push_back({"eps", true});

    mask.map.resize(io.events->size());
    for (EventId e = 0; e < io.events->size(); ++e) {
        if (io.is_init_pair(e))
            mask.map[e] = 0;
        else if (io.observable[e])
            mask.map[e] = image_id.at(io.input_names[io.parts[e].first]);
        else
            mask.map[e] = silent;
    }
    mask.image = Alphabet::make(std::move(image_events));
    return mask;
}

std::vector<EventId> ObservationMask::apply_string(std::span<const EventId> w) const {
    std::vector<EventId> out;
    for (EventId e : w)
        if (!erases(e)) out.push_back(map[e]);
    return out;
}

std::vector<std::string> ObservationMask::apply_string_names(std::span<const EventId> w) const {
    std::vector<std::string> out;
    for (EventId e : apply_string(w)) out.push_back(image->name(e));
    return out;
}

Nfa apply_mask(const Nfa& g, const ObservationMask& mask) {
    if (!same_alphabet(g.alphabet, mask.domain))
        throw MaskDomainError("mask is not total on the automaton's alphabet");
    Nfa out(mask.image);
    for (StateId q = 0; q < g.num_states; ++q) out.add_state(g.name_of(q));
    for (StateId q = 0; q < g.num_states; ++q)
        for (EventId e = 0; e < g.alphabet->size(); ++e)
            for (StateId t : g.targets(q, e)) out.add_transition(q, mask.apply(e), t);
    out.set_initial(g.initial);
    out.set_marked(g.marked);
    return out;
}

ObservationMask compose(const ObservationMask& outer, const ObservationMask& inner) {
    if (!same_alphabet(outer.domain, inner.image))
        throw MaskDomainError("composition: outer mask not total on inner image");
    ObservationMask mask;
    mask.domain = inner.domain;
    mask.image = outer.image;
    if (!mask.image->silent()) throw MaskDomainError("composition: outer image lacks a silent symbol");
    mask.map.resize(inner.map.size());
    for (EventId e = 0; e < inner.map.size(); ++e)
        mask.map[e] = inner.erases(e) ? *mask.image->silent() : outer.map[inner.map[e]];
    return mask;
}

std::pair<std::vector<std::string>, std::vector<std::string>> io_projections(
    const IoAlphabet& io, std::span<const EventId> run) {
    std::vector<std::string> inputs, outputs;
    for (EventId e : run) {
        const auto& [input, lab] = io.parts[e];
        inputs.push_back(input == IoAlphabet::kInit ? "sigma_init" : io.input_names[input]);
        outputs.push_back(io.label_names[lab]);
    }
    return {std::move(inputs), std::move(outputs)};
}

}  // namespace opacity
