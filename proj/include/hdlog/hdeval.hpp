#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hdlog/counts.hpp"
#include "hdlog/decomp.hpp"
#include "hdlog/eval.hpp"
#include "hdlog/fact_store.hpp"

namespace hdlog {

// An instantiation of one decomposition node: constants for chi(p) in chi
// order.
using Tuple = std::vector<ConstId>;
using TupleSet = std::set<Tuple>;
using TupleCounts = std::map<Tuple, int64_t>;

// Region a node's active set is drawn from during one cross-node pass.
enum class Label : uint8_t {
    I,      // instI
    Plus,   // instPlus
    IPlus,  // instI ∪ instPlus
    Minus,  // instMinus
    IMinus, // instI \ instMinus
};

enum class LabelSign : uint8_t { Plus, Minus };

// Pivot labelling: under Plus, nodes before the pivot may use old and new
// tuples, the pivot must use a new one, and later nodes old only — so a joint
// instantiation involving k new tuples is enumerated exactly once, at the
// pivot equal to its last new node. Minus is the mirror image for dying
// tuples, with earlier nodes unrestricted (dying tuples are still present).
Label label_for(LabelSign sign, uint32_t pivot, uint32_t node);

// Per-node instantiation state, persisted across updates. tupleCounts holds,
// for every tuple of instI, the number of distinct lambda(p) matches
// currently supporting it; a tuple leaves instI only when its count reaches
// zero. instRe collects tuples removed during overdeletion until the
// rederivation step has run.
struct NodeStore {
    struct NodeSets {
        TupleSet instI;
        TupleSet instPlus;
        TupleSet instMinus;
        TupleSet instAc;
        TupleSet instRe;
        TupleCounts tupleCounts;
    };

    HypertreeDecomposition hd;
    std::vector<NodeSets> nodes;

    NodeStore() = default;
    explicit NodeStore(HypertreeDecomposition decomposition)
        : hd(std::move(decomposition)), nodes(hd.nodes.size()) {}
};

// Head facts produced by one cross-node pass with, per fact, the number of
// distinct joint instantiations that derived it. Joint instantiations are
// counted one per combination of node tuples; this equals the number of rule
// instances whenever chi(p) = var(lambda(p)) for every node, which decompose
// guarantees.
using FactCounts = std::unordered_map<Fact, int64_t, FactHash>;

struct CrossNodeOptions {
    bool full_reducer = true;         // run the semijoin passes at all
    bool pivot_pass_heuristic = true; // skip the pivot-rooted pass unless the
                                      // pivot's active set is 3x smaller than
                                      // the largest one
    // Instrumentation: called once per pivot after the active sets are set
    // and before any reduction.
    std::function<void(uint32_t pivot, const NodeStore& ns)> on_pivot;
};

// Called by the update operators after the evaluation pass, while instPlus /
// instMinus / instRe still hold the pass's working sets.
using NodeStoreHook = std::function<void(const Rule& rule, const NodeStore& ns)>;

// New (or dying) instantiations of one node: matches of lambda(p) over the
// store that use at least one Delta-tagged fact, projected to chi(p), with
// the number of such matches per tuple.
TupleCounts pi_p(const Rule& rule, const DecompNode& node, const FactStore& store,
                 EvalCounters* counters = nullptr);

// instAc(p) per the label (see Label).
void set_active(NodeStore& ns, uint32_t node, Label label);

// Semijoin passes over the tree, rooted anywhere: top_down reduces each node
// by its BFS predecessor, bottom_up reduces each BFS predecessor by the nodes
// below it. Shared schema is chi(p) ∩ chi(q); with no shared variables a
// nonempty source leaves the target unchanged and an empty source empties it.
void top_down_lsj(NodeStore& ns, uint32_t root, EvalCounters* counters = nullptr);
void bottom_up_lsj(NodeStore& ns, uint32_t root, EvalCounters* counters = nullptr);

// Joins the active sets bottom-up along the tree, keeping chi(p) ∪ var(h(r))
// at every step; the root's table is projected to var(h(r)) in head-variable
// order. Multiplicities multiply across joins and add up under projection.
std::map<Tuple, int64_t> cross_node_join(const Rule& rule, const NodeStore& ns,
                                         EvalCounters* counters = nullptr);

// One pass per pivot node: label every node, reduce, join, and accumulate
// head facts with their joint-instantiation counts.
FactCounts cross_node_evaluation(const Rule& rule, NodeStore& ns, LabelSign sign,
                                 EvalCounters* counters = nullptr,
                                 const CrossNodeOptions& options = {});

// Incremental operators. The store carries the update set tagged as the
// Delta region (matching the standard operators' convention); counts, when
// given, receives one increment/decrement per joint rule instance.
//
// add: instPlus := pi \ instI per node, evaluate under Plus labels, merge
// instPlus into instI; returns derived facts not yet in the store.
FactSet hd_add(const Rule& rule, const FactStore& store, NodeStore& ns,
               DerivationCountTable* counts = nullptr, EvalCounters* counters = nullptr,
               const CrossNodeOptions& options = {}, const NodeStoreHook& hook = {});

// del: decrement per-tuple support by pi's multiplicities; tuples whose
// support reaches zero form instMinus, are evaluated under Minus labels, move
// to instRe and leave instI; returns affected facts that survive the deletion
// set itself.
FactSet hd_del(const Rule& rule, const FactStore& store, NodeStore& ns,
               DerivationCountTable* counts = nullptr, EvalCounters* counters = nullptr,
               const CrossNodeOptions& options = {}, const NodeStoreHook& hook = {});

// red: runs after overdeletion. Revives instRe tuples whose support count is
// still positive, evaluates them under Plus labels, and unions the facts of
// delta this rule still derives (per-rule derivation count positive); clears
// instRe.
FactSet hd_red(const Rule& rule, const FactStore& store, NodeStore& ns, const FactSet& delta,
               DerivationCountTable& counts, EvalCounters* counters = nullptr,
               const CrossNodeOptions& options = {}, const NodeStoreHook& hook = {});

// `inst <rule> <node> <set-name> {tuple;...}` per node and set, nodes 1-based,
// tuples ordered by their rendered text.
std::string dump_node_store(const Vocabulary& vocab, const Rule& rule, const NodeStore& ns);

// Recomputes the full in-node join of every node over the current store and
// compares it (tuples and support counts) with instI/tupleCounts; returns an
// empty string on agreement, else a description of the first mismatch.
std::string check_node_store(const Rule& rule, const FactStore& store, const NodeStore& ns,
                             EvalCounters* counters = nullptr);

} // namespace hdlog
