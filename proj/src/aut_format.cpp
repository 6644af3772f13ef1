#include "opacity/aut_format.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <tuple>

namespace opacity {

namespace {

struct Token {
    std::string text;
    int line;
    int col;
};

std::vector<std::vector<Token>> tokenize(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    std::vector<Token> current;
    int line = 1, col = 1;
    std::string word;
    int word_col = 0;
    bool comment = false;

    auto flush_word = [&]() {
        if (!word.empty()) current.push_back({word, line, word_col});
        word.clear();
    };
    auto flush_line = [&]() {
        flush_word();
        if (!current.empty()) lines.push_back(std::move(current));
        current.clear();
    };

    for (char c : text) {
        if (c == '\n') {
            flush_line();
            comment = false;
            ++line;
            col = 1;
            continue;
        }
        if (comment) {
            ++col;
            continue;
        }
        if (c == '#') {
            flush_word();
            comment = true;
        } else if (c == ' ' || c == '\t' || c == '\r') {
            flush_word();
        } else {
            if (word.empty()) word_col = col;
            word += c;
        }
        ++col;
    }
    flush_line();
    return lines;
}

int parse_int(const Token& tok, const char* what) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(tok.text, &pos);
    } catch (const std::exception&) {
        throw ParseError("SyntaxError", tok.line, tok.col, std::string("expected ") + what);
    }
    if (pos != tok.text.size() || value < 0)
        throw ParseError("SyntaxError", tok.line, tok.col, std::string("expected ") + what);
    return value;
}

}  // namespace

LabeledSystem parse_aut(const std::string& text) {
    auto lines = tokenize(text);

    std::string name;
    std::optional<int> num_states;
    std::vector<StateId> initial, secret;
    std::vector<EventSym> events;
    std::vector<bool> observable;
    std::vector<std::tuple<StateId, std::string, StateId, Token>> transitions;
    bool saw_name = false, saw_initial = false, saw_secret = false, saw_events = false;

    auto need_states = [&](const Token& tok) {
        if (!num_states)
            throw ParseError("SyntaxError", tok.line, tok.col, "'states' must be declared first");
    };
    auto state_ref = [&](const Token& tok) {
        need_states(tok);
        int id = parse_int(tok, "state id");
        if (id >= *num_states)
            throw ParseError("UndefinedState", tok.line, tok.col, "state " + tok.text + " not declared");
        return StateId(id);
    };

    for (const auto& line : lines) {
        const Token& head = line[0];
        if (head.text == "name") {
            if (saw_name) throw ParseError("DuplicateDeclaration", head.line, head.col, "name");
            if (line.size() != 2)
                throw ParseError("SyntaxError", head.line, head.col, "usage: name <identifier>");
            saw_name = true;
            name = line[1].text;
        } else if (head.text == "states") {
            if (num_states) throw ParseError("DuplicateDeclaration", head.line, head.col, "states");
            if (line.size() != 2)
                throw ParseError("SyntaxError", head.line, head.col, "usage: states <count>");
            num_states = parse_int(line[1], "state count");
        } else if (head.text == "initial") {
            if (saw_initial) throw ParseError("DuplicateDeclaration", head.line, head.col, "initial");
            saw_initial = true;
            for (std::size_t i = 1; i < line.size(); ++i) initial.push_back(state_ref(line[i]));
        } else if (head.text == "secret") {
            if (saw_secret) throw ParseError("DuplicateDeclaration", head.line, head.col, "secret");
            saw_secret = true;
            for (std::size_t i = 1; i < line.size(); ++i) secret.push_back(state_ref(line[i]));
        } else if (head.text == "events") {
            if (saw_events) throw ParseError("DuplicateDeclaration", head.line, head.col, "events");
            saw_events = true;
            for (std::size_t i = 1; i < line.size(); ++i) {
                const Token& tok = line[i];
                auto sep = tok.text.rfind(':');
                if (sep == std::string::npos || sep == 0 || sep + 2 != tok.text.size() ||
                    (tok.text[sep + 1] != 'o' && tok.text[sep + 1] != 'u'))
                    throw ParseError("SyntaxError", tok.line, tok.col, "expected <event>:o or <event>:u");
                std::string ev = tok.text.substr(0, sep);
                if (ev == "sigma_init")
                    throw ParseError("SyntaxError", tok.line, tok.col, "sigma_init is implicit");
                for (const auto& existing : events)
                    if (existing.name == ev)
                        throw ParseError("DuplicateDeclaration", tok.line, tok.col, "event " + ev);
                events.push_back({ev, false});
                observable.push_back(tok.text[sep + 1] == 'o');
            }
        } else if (head.text == "trans") {
            if (line.size() != 4)
                throw ParseError("SyntaxError", head.line, head.col, "usage: trans <src> <event> <dst>");
            if (!saw_events)
                throw ParseError("SyntaxError", head.line, head.col, "'events' must be declared first");
            transitions.emplace_back(state_ref(line[1]), line[2].text, state_ref(line[3]), line[2]);
        } else {
            throw ParseError("SyntaxError", head.line, head.col, "unknown section '" + head.text + "'");
        }
    }

    if (!num_states) throw ParseError("SyntaxError", int(lines.size()) + 1, 1, "missing 'states'");
    if (!saw_events) throw ParseError("SyntaxError", int(lines.size()) + 1, 1, "missing 'events'");
    if (!saw_initial) throw ParseError("SyntaxError", int(lines.size()) + 1, 1, "missing 'initial'");

    Nfa a(Alphabet::make(events));
    for (int x = 0; x < *num_states; ++x) a.add_state();
    for (const auto& [src, event_name, dst, tok] : transitions) {
        auto e = a.alphabet->find(event_name);
        if (!e)
            throw ParseError("UndefinedEvent", tok.line, tok.col, "event " + event_name + " not declared");
        a.add_transition(src, *e, dst);
    }
    a.set_initial(std::move(initial));
    return make_labeled_system(std::move(a), secret, observable, name);
}

std::string serialize_aut(const LabeledSystem& sys) {
    std::ostringstream out;
    if (!sys.name.empty()) out << "name " << sys.name << "\n";
    out << "states " << sys.num_states() << "\n";
    out << "initial";
    for (StateId x : sys.automaton.initial) out << " " << x;
    out << "\n";
    auto secret = sys.secret_states();
    if (!secret.empty()) {
        out << "secret";
        for (StateId x : secret) out << " " << x;
        out << "\n";
    }
    out << "events";
    for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e)
        out << " " << sys.automaton.alphabet->name(e) << ":" << (sys.observable[e] ? 'o' : 'u');
    out << "\n";
    for (StateId x = 0; x < sys.num_states(); ++x)
        for (EventId e = 0; e < sys.automaton.alphabet->size(); ++e)
            for (StateId t : sys.automaton.targets(x, e))
                out << "trans " << x << " " << sys.automaton.alphabet->name(e) << " " << t << "\n";
    return out.str();
}

}  // namespace opacity
