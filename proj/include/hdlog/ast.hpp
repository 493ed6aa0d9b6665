#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hdlog/vocabulary.hpp"

namespace hdlog {

struct Term {
    enum class Kind : uint8_t { Variable, Constant };

    Kind kind;
    uint32_t id; // VarId or ConstId depending on kind

    static Term var(VarId v) { return Term{Kind::Variable, v}; }
    static Term cons(ConstId c) { return Term{Kind::Constant, c}; }

    bool is_var() const { return kind == Kind::Variable; }
    bool is_const() const { return kind == Kind::Constant; }

    friend bool operator==(const Term& a, const Term& b) = default;
};

struct Atom {
    PredId pred = 0;
    std::vector<Term> args;

    friend bool operator==(const Atom& a, const Atom& b) = default;
};

struct Fact {
    PredId pred = 0;
    std::vector<ConstId> args;

    friend bool operator==(const Fact& a, const Fact& b) = default;
};

struct FactHash {
    size_t operator()(const Fact& f) const noexcept {
        uint64_t h = 1469598103934665603ull ^ f.pred;
        for (ConstId a : f.args) {
            h ^= a;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

using FactSet = std::unordered_set<Fact, FactHash>;

// A rule H :- B0, ..., Bn with at least one body atom. Variables are interned
// per rule: Term ids index var_names, and every name starts with '?'.
struct Rule {
    std::string id;       // stable label, e.g. "r1"
    uint32_t ordinal = 0; // position within the program, keys per-rule counts
    Atom head;
    std::vector<Atom> body;
    std::vector<std::string> var_names;

    size_t num_vars() const { return var_names.size(); }

    // Head variables in order of first occurrence in the head atom.
    std::vector<VarId> head_vars() const {
        std::vector<VarId> out;
        for (const Term& t : head.args)
            if (t.is_var() && std::find(out.begin(), out.end(), t.id) == out.end())
                out.push_back(t.id);
        return out;
    }
};

struct Program {
    std::vector<Rule> rules;
};

std::string to_string(const Vocabulary& vocab, const Fact& fact);
std::string to_string(const Vocabulary& vocab, const Rule& rule, const Atom& atom);
std::string to_string(const Vocabulary& vocab, const Rule& rule);

// Dump order for fact files and reports: predicate name, then constant text
// per position.
bool fact_text_less(const Vocabulary& vocab, const Fact& a, const Fact& b);
std::vector<Fact> sorted_facts(const Vocabulary& vocab, const FactSet& facts);

} // namespace hdlog
