#pragma once

#include <string>
#include <vector>

#include "opacity/moore.hpp"

namespace opacity {

enum class NotionKind { CurrentState, InitialState, KStep, InfiniteStep };
enum class SecretMode { Joint, Separate };

/// Algebraic description of an opacity notion. CSO/ISO ignore mode, type
/// and K.
struct OpacityNotion {
    NotionKind kind = NotionKind::CurrentState;
    SecretMode mode = SecretMode::Joint;
    int secret_type = 1;  // 1: some secret state visited in an epoch; 2: only secret states
    int k = 0;

    static OpacityNotion cso() { return {NotionKind::CurrentState, SecretMode::Joint, 1, 0}; }
    static OpacityNotion iso() { return {NotionKind::InitialState, SecretMode::Joint, 1, 0}; }
    static OpacityNotion k_step(int k, SecretMode mode, int type) {
        return {NotionKind::KStep, mode, type, k};
    }
    static OpacityNotion infinite_step(SecretMode mode, int type) {
        return {NotionKind::InfiniteStep, mode, type, 0};
    }
    std::string to_string() const;
};

/// A nonsecret specification automaton over the IO alphabet. For separate
/// K-step specs, level_marks[k] is the marked set of the embedded level-k
/// spec; block_coord names each state by (block, local index).
struct SpecAutomaton {
    Nfa nfa;
    bool universal = false;  // L(nfa) = E*
    std::vector<std::vector<StateId>> level_marks;
    std::vector<std::pair<std::uint16_t, std::uint16_t>> block_coord;
};

/// Two-state spec marking E* E_NS: runs whose last visited state is nonsecret.
SpecAutomaton build_cso_spec(const IoAlphabet& io);

/// Three-state spec marking E_NS E*: runs starting in a nonsecret state.
SpecAutomaton build_iso_spec(const IoAlphabet& io);

/// The four K-step building blocks: the universal single-state automaton, the
/// observation-epoch automaton (E_o E_uo*), and the type-1/type-2 nonsecret
/// epoch automata. The type-2 block is deliberately nondeterministic.
struct EpochBlocks {
    Nfa universal;
    Nfa epoch;
    Nfa nonsecret_type1;
    Nfa nonsecret_type2;
};
EpochBlocks build_epoch_blocks(const IoAlphabet& io);

/// Iterated concatenation merge of the epoch blocks. Separate mode embeds
/// every level's spec in one automaton and records its marks; joint mode
/// chains K+1 nonsecret epoch blocks.
SpecAutomaton build_kstep_spec(const IoAlphabet& io, int k, SecretMode mode, int secret_type);

/// Spec marking runs consisting solely of nonsecret epochs; not universal,
/// so only forward/reverse comparison applies.
SpecAutomaton build_infinite_joint_spec(const IoAlphabet& io, int secret_type);

}  // namespace opacity
