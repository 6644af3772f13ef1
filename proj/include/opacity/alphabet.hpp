#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opacity/errors.hpp"

namespace opacity {

using StateId = std::uint32_t;
using EventId = std::uint32_t;

constexpr StateId kNoState = UINT32_MAX;

/// One symbol of an alphabet. A silent symbol stands for epsilon in an
/// epsilon-NFA; at most one per alphabet.
struct EventSym {
    std::string name;
    bool silent = false;
};

class Alphabet;
using AlphabetPtr = std::shared_ptr<const Alphabet>;

/// Immutable event table shared between automata. Operations that combine
/// two automata require the same table (by content) so that event ids line
/// up; anything else raises AlphabetMismatchError.
class Alphabet {
  public:
    static AlphabetPtr make(std::vector<EventSym> events);

    std::size_t size() const { return events_.size(); }
    const EventSym& event(EventId e) const { return events_[e]; }
    const std::string& name(EventId e) const { return events_[e].name; }
    bool is_silent(EventId e) const { return events_[e].silent; }
    std::optional<EventId> silent() const { return silent_; }
    std::optional<EventId> find(std::string_view name) const;

    bool operator==(const Alphabet& other) const;
    bool operator!=(const Alphabet& other) const { return !(*this == other); }

  private:
    std::vector<EventSym> events_;
    std::optional<EventId> silent_;
    std::unordered_map<std::string, EventId> index_;
};

inline bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
    return a == b || (a && b && *a == *b);
}

void require_same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b, const char* op);

}  // namespace opacity
