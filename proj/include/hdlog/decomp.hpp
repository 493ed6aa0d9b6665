#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdlog/ast.hpp"
#include "hdlog/stats.hpp"

namespace hdlog {

// A rooted tree over the rule body: node p carries the atoms lambda(p)
// (indices into rule.body) and the variables chi(p), ordered by first
// occurrence within lambda(p). Nodes are stored in evaluation order with
// nodes[0] the root; parent[i] is -1 for the root.
struct DecompNode {
    std::vector<uint32_t> atoms; // sorted body indices
    std::vector<VarId> chi;
};

struct HypertreeDecomposition {
    std::vector<DecompNode> nodes;
    std::vector<int32_t> parent;

    size_t size() const { return nodes.size(); }
    std::vector<std::vector<uint32_t>> children() const;
};

struct DecompCheck {
    bool ok = true;
    std::string violation; // first failed condition with a witness

    explicit operator bool() const { return ok; }
};

// Validates the four decomposition conditions: atom coverage, variable
// connectedness, chi(p) within var(lambda(p)), and the descendant condition
// var(lambda(p)) ∩ chi(subtree(p)) ⊆ chi(p).
DecompCheck check_decomposition(const Rule& rule, const HypertreeDecomposition& hd);

// max over nodes of |lambda(p)|.
uint32_t width(const HypertreeDecomposition& hd);

// Textbook join-size estimate: the in-node term accumulates intermediate
// join sizes left to right over lambda(p); every tree edge adds the semijoin
// term 2*(|p_i| + |p_j|) over the estimated node sizes.
double estimate_cost(const Vocabulary& vocab, const Rule& rule, const HypertreeDecomposition& hd,
                     const RelationStats& stats);

struct DecomposeOptions {
    uint32_t max_atoms = 12; // search-space bound, larger bodies are an error
    uint32_t max_width = 3;
};

// Searches block partitions of the body in increasing width; candidate trees
// are maximum shared-variable-weight spanning trees, chi(p) = var(lambda(p)).
// Among the valid candidates of the smallest feasible width, returns the one
// minimising estimate_cost (ties: fewer nodes, then lexicographic smallest
// lambda key). Falls back to the single-node decomposition when nothing
// within max_width validates.
HypertreeDecomposition decompose(const Vocabulary& vocab, const Rule& rule,
                                 const RelationStats& stats,
                                 const DecomposeOptions& options = {});

// True iff the rule has no width-1 decomposition (its body is cyclic).
bool is_complex(const Rule& rule, const DecomposeOptions& options = {});

// `node <id> parent=<id|-> chi={...} lambda={atom,...}` per node, 1-based ids.
std::string dump_decomposition(const Vocabulary& vocab, const Rule& rule,
                               const HypertreeDecomposition& hd);

// Variables of the given atoms in order of first occurrence.
std::vector<VarId> atoms_vars(const Rule& rule, const std::vector<uint32_t>& atoms);

} // namespace hdlog
