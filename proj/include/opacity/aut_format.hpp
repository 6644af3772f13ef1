#pragma once

#include <string>

#include "opacity/moore.hpp"

namespace opacity {

/// Parses the textual automaton format:
///
///     # comment
///     name fig2
///     states 5
///     initial 0
///     secret 1 4
///     events sigma_u:u sigma_o:o
///     trans 0 sigma_u 1
///
/// `states` and `events` must precede lines that reference them; sigma_init
/// is implicit and must not be declared. Errors carry line and column.
LabeledSystem parse_aut(const std::string& text);

/// Canonical form: fixed section order, sorted id lists, transitions sorted
/// by (src, event, dst). parse ∘ serialize is the identity on structure and
/// serialize ∘ parse is the identity on canonical text.
std::string serialize_aut(const LabeledSystem& sys);

}  // namespace opacity
