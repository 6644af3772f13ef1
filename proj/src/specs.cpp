#include "opacity/specs.hpp"

namespace opacity {

std::string OpacityNotion::to_string() const {
    switch (kind) {
        case NotionKind::CurrentState: return "cso";
        case NotionKind::InitialState: return "iso";
        case NotionKind::KStep:
            return (mode == SecretMode::Joint ? "joint-" : "separate-") +
                   std::to_string(secret_type) + ":K=" + std::to_string(k);
        case NotionKind::InfiniteStep:
            return (mode == SecretMode::Joint ? "inf-joint-" : "inf-separate-") +
                   std::to_string(secret_type);
    }
    return "?";
}

namespace {

void add_edges(Nfa& nfa, StateId src, const std::vector<EventId>& events, StateId dst) {
    for (EventId e : events) nfa.add_transition(src, e, dst);
}

}  // namespace

SpecAutomaton build_cso_spec(const IoAlphabet& io) {
    auto e_ns = io.select(0, -1);
    auto e_s = io.select(1, -1);

    SpecAutomaton spec;
    spec.nfa = Nfa(io.events);
    StateId s0 = spec.nfa.add_state("0");
    StateId s1 = spec.nfa.add_state("1");
    add_edges(spec.nfa, s0, e_s, s0);
    add_edges(spec.nfa, s0, e_ns, s1);
    add_edges(spec.nfa, s1, e_ns, s1);
    add_edges(spec.nfa, s1, e_s, s0);
    spec.nfa.set_initial({s0});
    spec.nfa.set_marked({s1});
    spec.universal = true;
    return spec;
}

SpecAutomaton build_iso_spec(const IoAlphabet& io) {
    auto e_ns = io.select(0, -1);
    auto e_s = io.select(1, -1);
    auto e_all = io.select(-1, -1);

    SpecAutomaton spec;
    spec.nfa = Nfa(io.events);
    StateId s0 = spec.nfa.add_state("0");
    StateId s1 = spec.nfa.add_state("1");
    StateId s2 = spec.nfa.add_state("2");
    add_edges(spec.nfa, s0, e_ns, s1);
    add_edges(spec.nfa, s0, e_s, s2);
    add_edges(spec.nfa, s1, e_all, s1);
    add_edges(spec.nfa, s2, e_all, s2);
    spec.nfa.set_initial({s0});
    spec.nfa.set_marked({s1});
    spec.universal = true;
    return spec;
}

EpochBlocks build_epoch_blocks(const IoAlphabet& io) {
    auto e_all = io.select(-1, -1);
    auto e_o = io.select(-1, 1);
    auto e_uo = io.select(-1, 0);
    auto e_ns_o = io.select(0, 1);
    auto e_ns_uo = io.select(0, 0);

    EpochBlocks blocks;

    blocks.universal = Nfa(io.events);
    StateId u0 = blocks.universal.add_state("0");
    add_edges(blocks.universal, u0, e_all, u0);
    blocks.universal.set_initial({u0});
    blocks.universal.set_marked({u0});

    blocks.epoch = Nfa(io.events);
    StateId e_init = blocks.epoch.add_state("init");
    StateId e_acc = blocks.epoch.add_state("0");
    add_edges(blocks.epoch, e_init, e_o, e_acc);
    add_edges(blocks.epoch, e_acc, e_uo, e_acc);
    blocks.epoch.set_initial({e_init});
    blocks.epoch.set_marked({e_acc});

    blocks.nonsecret_type1 = Nfa(io.events);
    StateId n1_init = blocks.nonsecret_type1.add_state("init");
    StateId n1_acc = blocks.nonsecret_type1.add_state("0");
    add_edges(blocks.nonsecret_type1, n1_init, e_ns_o, n1_acc);
    add_edges(blocks.nonsecret_type1, n1_acc, e_ns_uo, n1_acc);
    blocks.nonsecret_type1.set_initial({n1_init});
    blocks.nonsecret_type1.set_marked({n1_acc});

    // the epoch holds a nonsecret pair either up front or somewhere in its
    // unobservable tail; nondeterministic on purpose
    blocks.nonsecret_type2 = Nfa(io.events);
    StateId n2_init = blocks.nonsecret_type2.add_state("init");
    StateId n2_acc = blocks.nonsecret_type2.add_state("0");
    StateId n2_wait = blocks.nonsecret_type2.add_state("1");
    add_edges(blocks.nonsecret_type2, n2_init, e_ns_o, n2_acc);
    add_edges(blocks.nonsecret_type2, n2_init, e_o, n2_wait);
    add_edges(blocks.nonsecret_type2, n2_acc, e_uo, n2_acc);
    add_edges(blocks.nonsecret_type2, n2_wait, e_uo, n2_wait);
    add_edges(blocks.nonsecret_type2, n2_wait, e_ns_uo, n2_acc);
    blocks.nonsecret_type2.set_initial({n2_init});
    blocks.nonsecret_type2.set_marked({n2_acc});

    return blocks;
}

namespace {

/// Appends one block to the spec under construction, keeping per-state
/// (block, local) coordinates so level marks never rely on name parsing.
void append_block(SpecAutomaton& spec, const Nfa& block, std::uint16_t block_index) {
    std::vector<StateId> map2;
    spec.nfa = merge_concatenate(spec.nfa, block, &map2);
    spec.block_coord.resize(spec.nfa.num_states);
    std::uint16_t local = 0;
    for (StateId q2 = 0; q2 < block.num_states; ++q2) {
        if (map2[q2] == kNoState) continue;
        spec.block_coord[map2[q2]] = {block_index, local++};
    }
    spec.nfa.state_names.resize(spec.nfa.num_states);
    for (StateId q = 0; q < spec.nfa.num_states; ++q) {
        const auto [bi, li] = spec.block_coord[q];
        spec.nfa.state_names[q] = "(" + std::to_string(bi) + "," + std::to_string(li) + ")";
    }
}

}  // namespace

SpecAutomaton build_kstep_spec(const IoAlphabet& io, int k, SecretMode mode, int secret_type) {
    if (k < 0) throw PreconditionError("K must be nonnegative");
    if (secret_type != 1 && secret_type != 2) throw PreconditionError("secret type is 1 or 2");
    EpochBlocks blocks = build_epoch_blocks(io);
    const Nfa& nonsecret = secret_type == 1 ? blocks.nonsecret_type1 : blocks.nonsecret_type2;

    SpecAutomaton spec;
    spec.nfa = blocks.universal;
    spec.block_coord = {{0, 0}};
    spec.nfa.state_names = {"(0,0)"};

    append_block(spec, nonsecret, 1);
    spec.level_marks.push_back(spec.nfa.marked);
    for (int level = 1; level <= k; ++level) {
        append_block(spec, mode == SecretMode::Joint ? nonsecret : blocks.epoch,
                     std::uint16_t(level + 1));
        spec.level_marks.push_back(spec.nfa.marked);
    }
    if (mode == SecretMode::Joint) spec.level_marks.clear();
    spec.universal = true;
    return spec;
}

SpecAutomaton build_infinite_joint_spec(const IoAlphabet& io, int secret_type) {
    if (secret_type != 1 && secret_type != 2) throw PreconditionError("secret type is 1 or 2");
    auto e_ns = io.select(0, -1);
    auto e_ns_o = io.select(0, 1);
    auto e_ns_uo = io.select(0, 0);
    auto e_o = io.select(-1, 1);
    auto e_uo = io.select(-1, 0);

    SpecAutomaton spec;
    spec.nfa = Nfa(io.events);
    if (secret_type == 1) {
        StateId s0 = spec.nfa.add_state("0");
        StateId s1 = spec.nfa.add_state("1");
        add_edges(spec.nfa, s0, e_ns_o, s1);
        add_edges(spec.nfa, s1, e_ns, s1);
        spec.nfa.set_initial({s0});
        spec.nfa.set_marked({s1});
    } else {
        // state 1: the current epoch already holds a nonsecret pair;
        // state 2: it does not yet
        StateId s0 = spec.nfa.add_state("0");
        StateId s1 = spec.nfa.add_state("1");
        StateId s2 = spec.nfa.add_state("2");
        add_edges(spec.nfa, s0, e_ns_o, s1);
        add_edges(spec.nfa, s0, e_o, s2);
        add_edges(spec.nfa, s1, e_uo, s1);
        add_edges(spec.nfa, s1, e_ns_o, s1);
        add_edges(spec.nfa, s1, e_o, s2);
        add_edges(spec.nfa, s2, e_uo, s2);
        add_edges(spec.nfa, s2, e_ns_uo, s1);
        spec.nfa.set_initial({s0});
        spec.nfa.set_marked({s1});
    }
    spec.universal = false;
    return spec;
}

}  // namespace opacity
