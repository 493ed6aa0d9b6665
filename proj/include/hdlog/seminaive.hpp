#pragma once

#include "hdlog/ast.hpp"
#include "hdlog/counts.hpp"
#include "hdlog/eval.hpp"
#include "hdlog/fact_store.hpp"
#include "hdlog/stats.hpp"

namespace hdlog {

// One seminaive propagation step: the union over rules and labelled
// evaluations of the instantiated heads, i.e. the facts derivable from I with
// at least one body atom in the store's delta region. The result is not
// filtered against I.
FactSet delta_apply(const Program& program, const FactStore& store,
                    EvalCounters* counters = nullptr);

// Seminaive materialisation: repeatedly merge the delta and derive the next
// one until the fixpoint. Explicit facts seed the first delta.
FactStore mat(const Program& program, const FactSet& explicit_facts, RoundStats* stats = nullptr);

// Incremental-step primitives for one rule. The caller has already merged the
// update delta into the store's delta region; counts, when given, receive one
// increment/decrement per rule instance that becomes valid/invalid.

// Returns r[I ∸ Δ+] \ I: new head facts with at least one body atom in Δ+.
FactSet std_add(const Rule& rule, const FactStore& store, DerivationCountTable* counts = nullptr,
                EvalCounters* counters = nullptr);

// Returns r[I ∸ Δ-] ∩ (I \ Δ-): facts whose derivation touches the facts
// being deleted and that are still present outside the deletion delta.
FactSet std_del(const Rule& rule, const FactStore& store, DerivationCountTable* counts = nullptr,
                EvalCounters* counters = nullptr);

// Returns r[I] ∩ delta: the one-step rederivable facts among delta. The store
// holds the remaining facts; delta facts have already been removed from it.
FactSet std_red(const Rule& rule, const FactStore& store, const FactSet& delta,
                EvalCounters* counters = nullptr);

} // namespace hdlog
