#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdlog/counts.hpp"
#include "hdlog/decomp.hpp"
#include "hdlog/hdeval.hpp"
#include "hdlog/seminaive.hpp"
#include "hdlog/stats.hpp"

namespace hdlog {

// Which per-rule operator family an engine uses: the flat seminaive operators
// for every rule, the decomposition-based ones for every rule, or the
// decomposition-based ones only where the rule's hypertree width exceeds one.
enum class EngineMode : uint8_t { Standard, Hd, Combined };

std::string to_string(EngineMode mode);
std::optional<EngineMode> parse_mode(std::string_view text);

enum class RuleEngine : uint8_t { Std, Hd };

struct EngineOptions {
    EngineMode mode = EngineMode::Combined;
    bool full_reducer = true;
    bool pivot_pass_heuristic = true;
    // Cost-model fallback for predicates with no facts in the initial sample.
    uint64_t default_tuples = 1000;
    // When set, replaces statistics derived from the initial facts entirely.
    std::optional<RelationStats> stats_override;
};

// Materialised database plus everything maintenance needs: the explicit
// subset lives in counts.explicit_facts, per-(fact, rule) derivation counts in
// counts, and one NodeStore per hypertree-assigned rule.
struct MaterialisationState {
    Vocabulary vocab;
    Program program;
    EngineOptions options;
    RelationStats stats;
    std::vector<RuleEngine> assignment; // aligned with program.rules
    std::vector<NodeStore> node_stores; // aligned; unused entries stay empty
    FactStore store;                    // I
    DerivationCountTable counts;
    EvalCounters counters; // cumulative over every phase run on this state

    const FactSet& explicit_facts() const { return counts.explicit_facts; }
};

struct UpdateRequest {
    std::vector<Fact> adds; // E+
    std::vector<Fact> dels; // E-
};

struct UpdateReport {
    uint64_t explicit_added = 0;   // |E+| after normalisation
    uint64_t explicit_removed = 0; // |E-| after normalisation
    uint64_t overdeleted = 0;      // derived facts swept out, |D \ E-|
    uint64_t rederived = 0;        // |delta| entering the re-addition loop
    uint64_t added = 0;            // |A|
    uint64_t removed = 0;          // facts absent afterwards, |D \ A|
    double overdelete_seconds = 0;
    double rederive_seconds = 0;
    double add_seconds = 0;
    RoundStats del_rounds;
    RoundStats add_rounds;

    std::vector<std::string> report_lines() const; // key=value
};

// Phase-by-phase node-store snapshots: one entry per (phase, wave, rule)
// taken before the per-wave merge, so the transient sets are visible.
struct TraceEntry {
    std::string phase; // "overdelete" | "rederive" | "add"
    uint32_t iteration = 0;
    std::string dump;
};

struct UpdateTrace {
    std::vector<TraceEntry> entries;
    std::string final_dump;
};

// Builds a ready state: statistics from the given facts (with defaults filled
// in for predicates that have none), a per-rule engine assignment for the
// mode, and a node store per hypertree-assigned rule. The facts themselves
// are not materialised; pass them to apply_update as additions.
MaterialisationState prepare(Vocabulary vocab, Program program, const std::vector<Fact>& facts,
                             EngineOptions options = {});

// Delete-rederive maintenance round: normalises the request against the
// current explicit set, overdeletes in waves, rederives once against the
// remainder, then re-adds in waves; finally updates the explicit set.
void apply_update(MaterialisationState& state, const UpdateRequest& request,
                  UpdateReport* report = nullptr, UpdateTrace* trace = nullptr);

// prepare() + apply_update() with the facts as one addition.
MaterialisationState materialise(Vocabulary vocab, Program program,
                                 const std::vector<Fact>& facts, EngineOptions options = {},
                                 UpdateReport* report = nullptr, UpdateTrace* trace = nullptr);

// Recomputes every per-(fact, rule) derivation count by brute force and every
// node's tuple-support table from the current store, then compares with the
// maintained tables. Empty string when everything matches.
std::string check_counts(const MaterialisationState& state);

// Store/table coherence: delta region empty, every stored fact explicit or
// positively counted and vice versa. Empty string when coherent.
std::string check_membership(const MaterialisationState& state);

// Both checks plus a from-scratch rematerialisation compared fact-for-fact.
std::string check_state(const MaterialisationState& state);

} // namespace hdlog
