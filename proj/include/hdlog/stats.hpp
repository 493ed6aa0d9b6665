#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hdlog/ast.hpp"
#include "hdlog/fact_store.hpp"

namespace hdlog {

// Per-round evaluation counters; totals are monotone within a run.
struct RoundStats {
    uint64_t rounds = 0;
    uint64_t substitutions_considered = 0;
    uint64_t facts_derived = 0;
    std::vector<uint64_t> per_round_substitutions;
    std::vector<uint64_t> per_round_derived;

    void record_round(uint64_t substitutions, uint64_t derived) {
        rounds++;
        substitutions_considered += substitutions;
        facts_derived += derived;
        per_round_substitutions.push_back(substitutions);
        per_round_derived.push_back(derived);
    }

    std::vector<std::string> report_lines(const std::string& prefix) const;
};

// Relation cardinalities and per-position distinct-value counts, computed
// from the explicit facts once and reused for every cost estimate.
struct RelationStats {
    struct PredStats {
        std::string name; // for diagnostics
        uint64_t tuples = 0;
        std::vector<uint64_t> distinct; // per argument position
    };

    std::unordered_map<PredId, PredStats> preds;

    const PredStats* find(PredId pred) const {
        auto it = preds.find(pred);
        return it == preds.end() ? nullptr : &it->second;
    }

    // Predicates used by the program but absent from the sample (e.g. purely
    // derived ones before the first materialisation) get a uniform default.
    void fill_missing(const Program& program, const Vocabulary& vocab, uint64_t tuples);

    static RelationStats from_store(const FactStore& store, const Vocabulary& vocab);
    static RelationStats from_facts(const std::vector<Fact>& facts, const Vocabulary& vocab);

    // Every predicate of the program with the same tuple count and fully
    // distinct columns; used by tests and as a stats-free fallback.
    static RelationStats uniform(const Program& program, const Vocabulary& vocab, uint64_t tuples);
};

// One predicate per line: `<name> <tuples> <distinct per position...>`.
std::string dump_stats(const RelationStats& stats);
RelationStats parse_stats(const std::string& text, Vocabulary& vocab);

} // namespace hdlog
