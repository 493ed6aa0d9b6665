#pragma once

// Brute-force reference implementations used by the tests. Everything here
// is deliberately naive: nested-loop matching over plain vectors, no indexes,
// no delta tracking, so the engine under test shares no code path with its
// oracle beyond the AST.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hdlog/ast.hpp"
#include "hdlog/counts.hpp"
#include "hdlog/decomp.hpp"
#include "hdlog/eval.hpp"
#include "hdlog/parser.hpp"
#include "hdlog/vocabulary.hpp"

namespace oracle {

using hdlog::Atom;
using hdlog::Binding;
using hdlog::ConstId;
using hdlog::DerivationCountTable;
using hdlog::Fact;
using hdlog::FactSet;
using hdlog::kNoBinding;
using hdlog::Program;
using hdlog::Rule;
using hdlog::Term;
using hdlog::VarId;
using hdlog::Vocabulary;

inline Fact ground(const Rule& rule, const Atom& atom, const Binding& binding) {
    Fact f;
    f.pred = atom.pred;
    f.args.reserve(atom.args.size());
    for (const Term& t : atom.args)
        f.args.push_back(t.is_const() ? t.id : binding[t.id]);
    return f;
}

// Every substitution matching the listed body atoms against `facts`,
// enumerated by nested loops over the full fact vector.
inline void for_each_instance_atoms(const Rule& rule, const std::vector<uint32_t>& atoms,
                                    const std::vector<Fact>& facts,
                                    const std::function<void(const Binding&)>& fn) {
    Binding binding(rule.num_vars(), kNoBinding);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == atoms.size()) {
            fn(binding);
            return;
        }
        const Atom& atom = rule.body[atoms[i]];
        for (const Fact& f : facts) {
            if (f.pred != atom.pred || f.args.size() != atom.args.size())
                continue;
            std::vector<VarId> fresh;
            bool ok = true;
            for (size_t a = 0; ok && a < atom.args.size(); ++a) {
                const Term& t = atom.args[a];
                if (t.is_const()) {
                    ok = t.id == f.args[a];
                } else if (binding[t.id] == kNoBinding) {
                    binding[t.id] = f.args[a];
                    fresh.push_back(t.id);
                } else {
                    ok = binding[t.id] == f.args[a];
                }
            }
            if (ok)
                rec(i + 1);
            for (VarId v : fresh)
                binding[v] = kNoBinding;
        }
    };
    rec(0);
}

inline void for_each_instance(const Rule& rule, const std::vector<Fact>& facts,
                              const std::function<void(const Binding&)>& fn) {
    std::vector<uint32_t> atoms(rule.body.size());
    for (uint32_t i = 0; i < atoms.size(); ++i)
        atoms[i] = i;
    for_each_instance_atoms(rule, atoms, facts, fn);
}

inline std::vector<Fact> to_vector(const FactSet& facts) {
    return std::vector<Fact>(facts.begin(), facts.end());
}

// r[I] over a plain fact vector.
inline FactSet apply_rule_naive(const Rule& rule, const std::vector<Fact>& facts) {
    FactSet out;
    for_each_instance(rule, facts,
                      [&](const Binding& b) { out.insert(ground(rule, rule.head, b)); });
    return out;
}

// Least fixpoint by iterating full rule application until nothing changes.
inline FactSet naive_fixpoint(const Program& program, const FactSet& explicit_facts) {
    FactSet all = explicit_facts;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Fact> facts = to_vector(all);
        for (const Rule& rule : program.rules)
            for (const Fact& f : apply_rule_naive(rule, facts))
                changed |= all.insert(f).second;
    }
    return all;
}

inline bool touches(const Rule& rule, const Binding& binding, const FactSet& delta) {
    for (const Atom& atom : rule.body)
        if (delta.contains(ground(rule, atom, binding)))
            return true;
    return false;
}

// r[I with delta required] \ I, where `all` is I (delta already inserted).
inline FactSet contract_add(const Rule& rule, const FactSet& all, const FactSet& delta) {
    FactSet out;
    for_each_instance(rule, to_vector(all), [&](const Binding& b) {
        if (!touches(rule, b, delta))
            return;
        Fact h = ground(rule, rule.head, b);
        if (!all.contains(h))
            out.insert(h);
    });
    return out;
}

// r[I with delta required] ∩ (I \ delta), where `all` is I (delta still in).
inline FactSet contract_del(const Rule& rule, const FactSet& all, const FactSet& delta) {
    FactSet out;
    for_each_instance(rule, to_vector(all), [&](const Binding& b) {
        if (!touches(rule, b, delta))
            return;
        Fact h = ground(rule, rule.head, b);
        if (all.contains(h) && !delta.contains(h))
            out.insert(h);
    });
    return out;
}

// r[remaining] ∩ delta.
inline FactSet contract_red(const Rule& rule, const FactSet& remaining, const FactSet& delta) {
    FactSet out;
    for_each_instance(rule, to_vector(remaining), [&](const Binding& b) {
        Fact h = ground(rule, rule.head, b);
        if (delta.contains(h))
            out.insert(h);
    });
    return out;
}

// From-scratch derivation counts over the given fact set.
inline DerivationCountTable recount(const Program& program, const FactSet& all,
                                    const FactSet& explicit_facts) {
    DerivationCountTable table;
    table.explicit_facts = explicit_facts;
    std::vector<Fact> facts = to_vector(all);
    for (const Rule& rule : program.rules)
        for_each_instance(rule, facts, [&](const Binding& b) {
            table.add(ground(rule, rule.head, b), rule.ordinal, 1);
        });
    return table;
}

// From-scratch per-node tuples: projections of the node's own join over the
// given facts, with multiplicities.
inline std::map<std::vector<ConstId>, int64_t> node_tuples(const Rule& rule,
                                                           const std::vector<uint32_t>& atoms,
                                                           const std::vector<ConstId>& chi,
                                                           const std::vector<Fact>& facts) {
    std::map<std::vector<ConstId>, int64_t> out;
    for_each_instance_atoms(rule, atoms, facts, [&](const Binding& b) {
        std::vector<ConstId> tuple;
        tuple.reserve(chi.size());
        for (VarId v : chi)
            tuple.push_back(b[v]);
        out[tuple] += 1;
    });
    return out;
}

// --- exhaustive hypertree width -------------------------------------------

// Set partitions of {0..m-1} as restricted-growth strings.
inline void for_each_partition(uint32_t m,
                               const std::function<void(const std::vector<std::vector<uint32_t>>&)>& fn) {
    std::vector<uint32_t> assign(m, 0);
    std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t i, uint32_t used) {
        if (i == m) {
            std::vector<std::vector<uint32_t>> blocks(used);
            for (uint32_t a = 0; a < m; ++a)
                blocks[assign[a]].push_back(a);
            fn(blocks);
            return;
        }
        for (uint32_t b = 0; b <= used; ++b) {
            assign[i] = b;
            rec(i + 1, used + (b == used ? 1 : 0));
        }
    };
    if (m > 0)
        rec(0, 0);
}

// All labelled trees on n nodes, decoded from Pruefer sequences.
inline void for_each_labeled_tree(
    uint32_t n, const std::function<void(const std::vector<std::pair<uint32_t, uint32_t>>&)>& fn) {
    if (n == 1) {
        fn({});
        return;
    }
    if (n == 2) {
        fn({{0, 1}});
        return;
    }
    std::vector<uint32_t> seq(n - 2, 0);
    while (true) {
        std::vector<uint32_t> deg(n, 1);
        for (uint32_t s : seq)
            deg[s]++;
        std::set<uint32_t> leaves;
        for (uint32_t v = 0; v < n; ++v)
            if (deg[v] == 1)
                leaves.insert(v);
        std::vector<std::pair<uint32_t, uint32_t>> edges;
        for (uint32_t s : seq) {
            uint32_t leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.emplace_back(leaf, s);
            if (--deg[s] == 1)
                leaves.insert(s);
        }
        uint32_t u = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(u, *leaves.begin());
        fn(edges);
        size_t i = 0;
        for (; i < seq.size(); ++i) {
            if (++seq[i] < n)
                break;
            seq[i] = 0;
        }
        if (i == seq.size())
            break;
    }
}

inline hdlog::HypertreeDecomposition
make_decomposition(const Rule& rule, std::vector<std::vector<uint32_t>> blocks,
                   const std::vector<std::pair<uint32_t, uint32_t>>& edges) {
    hdlog::HypertreeDecomposition hd;
    for (auto& blk : blocks) {
        std::sort(blk.begin(), blk.end());
        hdlog::DecompNode node;
        node.chi = hdlog::atoms_vars(rule, blk);
        node.atoms = std::move(blk);
        hd.nodes.push_back(std::move(node));
    }
    size_t n = hd.nodes.size();
    std::vector<std::vector<uint32_t>> adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    hd.parent.assign(n, -1);
    std::vector<char> seen(n, 0);
    std::vector<uint32_t> order{0};
    seen[0] = 1;
    for (size_t qi = 0; qi < order.size(); ++qi)
        for (uint32_t nxt : adj[order[qi]])
            if (!seen[nxt]) {
                seen[nxt] = 1;
                hd.parent[nxt] = static_cast<int32_t>(order[qi]);
                order.push_back(nxt);
            }
    return hd;
}

// Minimum over all partitions and all trees of the maximum block size among
// decompositions passing the four validity conditions. Exponential; callers
// keep bodies small.
inline uint32_t exhaustive_width(const Rule& rule) {
    const uint32_t m = static_cast<uint32_t>(rule.body.size());
    uint32_t best = m; // the single-node decomposition is always valid
    for_each_partition(m, [&](const std::vector<std::vector<uint32_t>>& blocks) {
        uint32_t w = 0;
        for (const auto& blk : blocks)
            w = std::max(w, static_cast<uint32_t>(blk.size()));
        if (w >= best)
            return;
        bool found = false;
        for_each_labeled_tree(static_cast<uint32_t>(blocks.size()),
                              [&](const std::vector<std::pair<uint32_t, uint32_t>>& edges) {
                                  if (found)
                                      return;
                                  auto hd = make_decomposition(rule, blocks, edges);
                                  if (hdlog::check_decomposition(rule, hd).ok)
                                      found = true;
                              });
        if (found)
            best = w;
    });
    return best;
}

// --- randomized instances ---------------------------------------------------

struct RandomInstance {
    Vocabulary vocab;
    Program program;
    std::vector<Fact> facts;
};

// Random programs mixing two-atom chain rules with the four-atom doubly
// recursive shape, over a small binary-predicate vocabulary.
inline RandomInstance random_instance(std::mt19937_64& rng, uint32_t max_rules,
                                      uint32_t max_facts, uint32_t num_consts = 8) {
    static const char* preds[] = {"P", "Q", "R", "S"};
    auto pred = [&](uint32_t bound) { return preds[rng() % bound]; };

    std::string text;
    uint32_t num_rules = 1 + static_cast<uint32_t>(rng() % max_rules);
    for (uint32_t r = 0; r < num_rules; ++r) {
        std::string head = pred(2); // heads stay within {P, Q}
        if (rng() % 2 == 0) {
            text += std::string(head) + "(?x,?y) :- " + pred(4) + "(?x,?z), " + pred(4) +
                    "(?z,?y).\n";
        } else {
            text += std::string(head) + "(?x,?y) :- " + pred(4) + "(?x,?z1), " + head +
                    "(?z1,?y), " + pred(4) + "(?x,?z2), " + head + "(?z2,?y).\n";
        }
    }

    uint32_t num_facts = 1 + static_cast<uint32_t>(rng() % max_facts);
    for (uint32_t f = 0; f < num_facts; ++f)
        text += std::string(pred(4)) + "(c" + std::to_string(rng() % num_consts) + ",c" +
                std::to_string(rng() % num_consts) + ").\n";

    RandomInstance inst;
    hdlog::ParsedUnit unit = hdlog::parse_unit(text, inst.vocab);
    inst.program = std::move(unit.program);
    inst.facts = std::move(unit.facts);
    return inst;
}

// Random subset of the given facts.
inline FactSet random_subset(std::mt19937_64& rng, const std::vector<Fact>& facts,
                             uint32_t percent) {
    FactSet out;
    for (const Fact& f : facts)
        if (rng() % 100 < percent)
            out.insert(f);
    return out;
}

} // namespace oracle
