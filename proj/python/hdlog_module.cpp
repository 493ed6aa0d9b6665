#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cctype>

#include "hdlog/dred.hpp"
#include "hdlog/gen.hpp"
#include "hdlog/parser.hpp"

namespace py = pybind11;

namespace {

using namespace hdlog;

// One materialised database: rules and facts parsed from text, maintained
// incrementally through update().
class Session {
  public:
    Session(const std::string& program_text, const std::string& facts_text,
            const std::string& mode) {
        Vocabulary vocab;
        Program program = parse_program(program_text, vocab);
        std::vector<Fact> facts = parse_facts(facts_text, vocab);
        EngineOptions options;
        auto parsed = parse_mode(mode);
        if (!parsed)
            throw std::invalid_argument("unknown mode '" + mode + "'");
        options.mode = *parsed;
        state_ = materialise(std::move(vocab), std::move(program), facts, options);
    }

    py::dict update(const std::string& adds_text, const std::string& dels_text) {
        UpdateRequest request;
        request.adds = parse_facts(adds_text, state_.vocab);
        request.dels = parse_facts(dels_text, state_.vocab);
        UpdateReport report;
        apply_update(state_, request, &report);
        py::dict out;
        out["explicit_added"] = report.explicit_added;
        out["explicit_removed"] = report.explicit_removed;
        out["overdeleted"] = report.overdeleted;
        out["rederived"] = report.rederived;
        out["added"] = report.added;
        out["removed"] = report.removed;
        return out;
    }

    size_t size() const { return state_.store.size(); }
    size_t explicit_size() const { return state_.explicit_facts().size(); }

    std::vector<std::string> facts() const {
        FactSet all;
        for (const Fact& f : state_.store.facts())
            all.insert(f);
        std::vector<std::string> out;
        for (const Fact& f : sorted_facts(state_.vocab, all))
            out.push_back(to_string(state_.vocab, f));
        return out;
    }

    bool contains(const std::string& fact_text) {
        std::string text = fact_text;
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
            text.pop_back();
        if (text.empty() || text.back() != '.')
            text += '.';
        std::vector<Fact> parsed = parse_facts(text, state_.vocab);
        if (parsed.size() != 1)
            throw std::invalid_argument("expected exactly one fact");
        return state_.store.contains(parsed[0]);
    }

    std::vector<std::pair<std::string, std::string>> assignment() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (size_t i = 0; i < state_.program.rules.size(); ++i)
            out.emplace_back(state_.program.rules[i].id,
                             state_.assignment[i] == RuleEngine::Hd ? "hd" : "std");
        return out;
    }

    std::string decompositions() const {
        std::string out;
        for (size_t i = 0; i < state_.program.rules.size(); ++i)
            if (state_.assignment[i] == RuleEngine::Hd) {
                out += "rule=" + state_.program.rules[i].id + "\n";
                out += dump_decomposition(state_.vocab, state_.program.rules[i],
                                          state_.node_stores[i].hd);
            }
        return out;
    }

    std::string check() const { return check_state(state_); }
    uint64_t substitutions() const { return state_.counters.substitutions; }
    std::string mode() const { return to_string(state_.options.mode); }

  private:
    MaterialisationState state_;
};

} // namespace

PYBIND11_MODULE(hdlog_py, m) {
    m.doc() = "Datalog materialisation and incremental maintenance engine";

    py::class_<Session>(m, "Session")
        .def(py::init<const std::string&, const std::string&, const std::string&>(),
             py::arg("program"), py::arg("facts"), py::arg("mode") = "combined")
        .def("update", &Session::update, py::arg("adds") = "", py::arg("dels") = "")
        .def("facts", &Session::facts)
        .def("contains", &Session::contains, py::arg("fact"))
        .def("assignment", &Session::assignment)
        .def("decompositions", &Session::decompositions)
        .def("check", &Session::check)
        .def("substitutions", &Session::substitutions)
        .def("mode", &Session::mode)
        .def("__len__", &Session::size)
        .def_property_readonly("explicit_size", &Session::explicit_size);

    m.def(
        "gen_collab",
        [](uint64_t n, uint64_t k) {
            GeneratedInstance inst = gen_collab({n, k});
            return py::make_tuple(inst.program_text, inst.facts_text);
        },
        py::arg("n"), py::arg("k"));
    m.def(
        "gen_exp",
        [](uint64_t num_expressions, uint64_t num_value_sets, uint64_t max_depth, uint64_t seed) {
            GeneratedInstance inst = gen_exp({num_expressions, num_value_sets, max_depth, seed});
            return py::make_tuple(inst.program_text, inst.facts_text);
        },
        py::arg("num_expressions"), py::arg("num_value_sets"), py::arg("max_depth"),
        py::arg("seed") = 1);
}
