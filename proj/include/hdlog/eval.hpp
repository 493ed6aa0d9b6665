#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hdlog/ast.hpp"
#include "hdlog/fact_store.hpp"

namespace hdlog {

struct EvalCounters {
    // Incremented once per successful partial-substitution extension during
    // body matching, per tuple probe in semijoin passes, and per matched
    // combination in cross-node joins.
    uint64_t substitutions = 0;
};

// Partial substitution over a rule's variables; kNoBinding marks free slots.
using Binding = std::vector<ConstId>;

Fact instantiate(const Rule& rule, const Atom& atom, const Binding& binding);

// Enumerates every substitution matching the given body atoms against the
// store, where atoms[k] is matched within scopes[k]. Atoms are processed left
// to right; fn receives the complete binding once per match.
void for_each_match(const Rule& rule, std::span<const uint32_t> atom_indices,
                    std::span<const Scope> scopes, const FactStore& store, Binding& binding,
                    EvalCounters* counters, const std::function<void(const Binding&)>& fn);

// True iff at least one match completes the given partial binding; stops at
// the first witness.
bool exists_match(const Rule& rule, std::span<const uint32_t> atom_indices,
                  std::span<const Scope> scopes, const FactStore& store, Binding& binding,
                  EvalCounters* counters = nullptr);

// r[I]: head facts over all substitutions matching the full body in I.
FactSet apply_rule(const Rule& rule, const FactStore& store, EvalCounters* counters = nullptr);

// The i-th labelled evaluation of the body: atoms before position i match in
// I minus delta, atom i matches in the delta region, atoms after i match in
// all of I. Returns the matching substitutions, complete and deduplicated.
std::vector<Binding> eval_body_labeled(const Rule& rule, size_t i, const FactStore& store,
                                       EvalCounters* counters = nullptr);

} // namespace hdlog
