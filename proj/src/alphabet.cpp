#include "opacity/alphabet.hpp"

namespace opacity {

AlphabetPtr Alphabet::make(std::vector<EventSym> events) {
    auto alpha = std::make_shared<Alphabet>();
    alpha->events_ = std::move(events);
    for (EventId e = 0; e < alpha->events_.size(); ++e) {
        const auto& sym = alpha->events_[e];
        if (!alpha->index_.emplace(sym.name, e).second)
            throw PreconditionError("duplicate event name '" + sym.name + "' in alphabet");
        if (sym.silent) {
            if (alpha->silent_)
                throw PreconditionError("alphabet has more than one silent symbol");
            alpha->silent_ = e;
        }
    }
    return alpha;
}

std::optional<EventId> Alphabet::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool Alphabet::operator==(const Alphabet& other) const {
    if (events_.size() != other.events_.size()) return false;
    for (std::size_t i = 0; i < events_.size(); ++i) {
        if (events_[i].name != other.events_[i].name || events_[i].silent != other.events_[i].silent)
            return false;
    }
    return true;
}

void require_same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b, const char* op) {
    if (!same_alphabet(a, b))
        throw AlphabetMismatchError(std::string(op) + ": operands use different event tables");
}

}  // namespace opacity
