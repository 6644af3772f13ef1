#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opacity/aut_format.hpp"
#include "opacity/bench.hpp"

namespace py = pybind11;
using namespace opacity;

namespace {

OpacityNotion notion_of(const std::string& kind, const std::string& mode, int secret_type, int k) {
    if (kind == "cso") return OpacityNotion::cso();
    if (kind == "iso") return OpacityNotion::iso();
    SecretMode m = mode == "separate" ? SecretMode::Separate : SecretMode::Joint;
    if (kind == "kstep") return OpacityNotion::k_step(k, m, secret_type);
    if (kind == "inf") return OpacityNotion::infinite_step(m, secret_type);
    throw std::invalid_argument("notion must be cso|iso|kstep|inf");
}

Method method_of(const std::string& name) {
    if (name == "forward") return Method::Forward;
    if (name == "reverse") return Method::Reverse;
    if (name == "so") return Method::SecretObserver;
    if (name == "auto") return Method::Auto;
    throw std::invalid_argument("method must be forward|reverse|so|auto");
}

VerifyOptions options_of(std::size_t budget, std::optional<double> timeout_ms) {
    VerifyOptions opts;
    opts.max_states = budget;
    opts.timeout_ms = timeout_ms;
    return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "opacity verification over finite automata";

    py::register_exception<ParseError>(m, "AutParseError");
    py::register_exception<BudgetExceededError>(m, "BudgetExceeded");
    py::register_exception<TimeoutError>(m, "Timeout");
    py::register_exception<OpacityError>(m, "OpacityLibError");

    py::class_<Nfa>(m, "Nfa")
        .def(py::init([](const std::vector<std::string>& events, int states,
                         const std::vector<StateId>& initial, const std::vector<StateId>& marked,
                         const std::vector<std::tuple<StateId, std::string, StateId>>& trans) {
                 std::vector<EventSym> syms;
                 for (const auto& name : events) syms.push_back({name, name == "eps"});
                 Nfa g(Alphabet::make(std::move(syms)));
                 for (int q = 0; q < states; ++q) g.add_state();
                 for (const auto& [src, event, dst] : trans) {
                     auto e = g.alphabet->find(event);
                     if (!e) throw std::invalid_argument("unknown event " + event);
                     g.add_transition(src, *e, dst);
                 }
                 g.set_initial(initial);
                 g.set_marked(marked);
                 return g;
             }),
             py::arg("events"), py::arg("states"), py::arg("initial"), py::arg("marked"),
             py::arg("trans"))
        .def_property_readonly("num_states", [](const Nfa& g) { return g.num_states; })
        .def_property_readonly("events",
                               [](const Nfa& g) {
                                   std::vector<std::string> names;
                                   for (EventId e = 0; e < g.alphabet->size(); ++e)
                                       names.push_back(g.alphabet->name(e));
                                   return names;
                               })
        .def("enumerate_marked", [](const Nfa& g, int max_len) {
            std::vector<std::vector<std::string>> out;
            for (const auto& w : enumerate_marked(g, max_len)) {
                std::vector<std::string> names;
                for (EventId e : w) names.push_back(g.alphabet->name(e));
                out.push_back(std::move(names));
            }
            return out;
        });

    py::class_<Dfa>(m, "Dfa")
        .def_property_readonly("num_states", [](const Dfa& d) { return std::size_t(d.num_states); })
        .def_property_readonly("num_live_states", &Dfa::num_live_states);

    m.def("product", [](const Nfa& g, const Nfa& h) { return product(g, h); });
    m.def("determinize", [](const Nfa& g) { return determinize(g); });
    m.def("reverse", [](const Nfa& g) { return reverse(g); });
    m.def("merge_concatenate", [](const Nfa& a, const Nfa& b) { return merge_concatenate(a, b); });

    py::class_<LabeledSystem>(m, "LabeledSystem")
        .def_property_readonly("name", [](const LabeledSystem& s) { return s.name; })
        .def_property_readonly("num_states", &LabeledSystem::num_states)
        .def_property_readonly("secret_states", &LabeledSystem::secret_states)
        .def("to_aut", [](const LabeledSystem& s) { return serialize_aut(s); })
        .def("__eq__", [](const LabeledSystem& a, const LabeledSystem& b) {
            return structurally_equal(a, b);
        });

    m.def("parse_aut", &parse_aut, py::arg("text"));
    m.def("serialize_aut", &serialize_aut, py::arg("system"));

    py::class_<Verdict>(m, "Verdict")
        .def_property_readonly("opaque", [](const Verdict& v) { return v.opaque; })
        .def_property_readonly("witness",
                               [](const Verdict& v) -> py::object {
                                   if (!v.witness) return py::none();
                                   return py::cast(*v.witness);
                               })
        .def_property_readonly("violated_level",
                               [](const Verdict& v) -> py::object {
                                   if (!v.violated_level) return py::none();
                                   return py::cast(*v.violated_level);
                               })
        .def_property_readonly("verifier_states",
                               [](const Verdict& v) { return v.stats.verifier_states; })
        .def_property_readonly("method", [](const Verdict& v) { return method_name(v.stats.method); })
        .def_property_readonly("elapsed_ns", [](const Verdict& v) { return v.stats.elapsed.count(); })
        .def("__repr__", [](const Verdict& v) {
            std::string out = v.opaque ? "<Verdict opaque" : "<Verdict not-opaque";
            if (v.witness) out += " witness='" + v.witness_string() + "'";
            return out + ">";
        });

    m.def(
        "verify",
        [](const LabeledSystem& sys, const std::string& notion, const std::string& mode,
           int secret_type, int k, const std::string& method, std::size_t budget,
           std::optional<double> timeout_ms) {
            return verify_state_based(sys, notion_of(notion, mode, secret_type, k),
                                      method_of(method), options_of(budget, timeout_ms));
        },
        py::arg("system"), py::arg("notion"), py::arg("mode") = "joint", py::arg("secret_type") = 1,
        py::arg("k") = 0, py::arg("method") = "auto", py::arg("budget") = 5'000'000,
        py::arg("timeout_ms") = py::none());

    m.def(
        "verify_separate_kstep",
        [](const LabeledSystem& sys, int k, int secret_type, std::size_t budget) {
            return verify_separate_kstep_so(sys, k, secret_type, options_of(budget, std::nullopt));
        },
        py::arg("system"), py::arg("k"), py::arg("secret_type"), py::arg("budget") = 5'000'000);

    m.def("check_observation_extendable", &check_observation_extendable);
    m.def("make_observation_extendable", &make_observation_extendable);

    py::class_<DelayEstimator>(m, "DelayEstimator")
        .def_property_readonly("num_states", &DelayEstimator::num_states)
        .def_property_readonly("opaque", [](const DelayEstimator& e) { return e.opaque; });

    m.def(
        "k_delay_state_estimator",
        [](const LabeledSystem& sys, int k, std::size_t budget) {
            return k_delay_state_estimator(sys, k, options_of(budget, std::nullopt));
        },
        py::arg("system"), py::arg("k"), py::arg("budget") = 5'000'000);
    m.def(
        "k_delay_trajectory_estimator",
        [](const LabeledSystem& sys, int k, std::size_t budget) {
            return k_delay_trajectory_estimator(sys, k, options_of(budget, std::nullopt));
        },
        py::arg("system"), py::arg("k"), py::arg("budget") = 5'000'000);
    m.def(
        "check_g_map_correspondence",
        [](const LabeledSystem& sys, int k, const std::string& which) {
            return check_g_map_correspondence(sys, k, which == "strong" ? GMap::Strong : GMap::Weak);
        },
        py::arg("system"), py::arg("k"), py::arg("which"));

    m.def("gen_dense", [](std::uint32_t n, std::uint64_t seed) { return gen_dense(n, seed); },
          py::arg("n"), py::arg("seed"));
    m.def("gen_grid", [](std::uint32_t side, std::uint64_t seed) { return gen_grid(side, seed); },
          py::arg("side"), py::arg("seed"));
    m.def("gen_cyclic", &gen_cyclic, py::arg("n"));
    m.def("gen_reset", &gen_reset, py::arg("i"));
    m.def("gen_revblow", &gen_revblow, py::arg("n"));
}
