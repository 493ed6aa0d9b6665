#include "hdlog/hdeval.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace hdlog {

Label label_for(LabelSign sign, uint32_t pivot, uint32_t node) {
    if (sign == LabelSign::Plus) {
        if (node < pivot)
            return Label::IPlus;
        return node == pivot ? Label::Plus : Label::I;
    }
    if (node < pivot)
        return Label::I;
    return node == pivot ? Label::Minus : Label::IMinus;
}

TupleCounts pi_p(const Rule& rule, const DecompNode& node, const FactStore& store,
                 EvalCounters* counters) {
    TupleCounts out;
    Binding binding(rule.num_vars(), kNoBinding);
    std::vector<Scope> scopes(node.atoms.size());
    for (size_t i = 0; i < node.atoms.size(); ++i) {
        for (size_t k = 0; k < node.atoms.size(); ++k)
            scopes[k] = k < i ? Scope::OldOnly : k == i ? Scope::DeltaOnly : Scope::All;
        for_each_match(rule, node.atoms, scopes, store, binding, counters,
                       [&](const Binding& b) {
                           Tuple t;
                           t.reserve(node.chi.size());
                           for (VarId v : node.chi)
                               t.push_back(b[v]);
                           out[std::move(t)] += 1;
                       });
    }
    return out;
}

void set_active(NodeStore& ns, uint32_t node, Label label) {
    auto& nd = ns.nodes.at(node);
    switch (label) {
    case Label::I:
        nd.instAc = nd.instI;
        break;
    case Label::Plus:
        nd.instAc = nd.instPlus;
        break;
    case Label::IPlus:
        nd.instAc = nd.instI;
        nd.instAc.insert(nd.instPlus.begin(), nd.instPlus.end());
        break;
    case Label::Minus:
        nd.instAc = nd.instMinus;
        break;
    case Label::IMinus:
        nd.instAc = nd.instI;
        for (const Tuple& t : nd.instMinus)
            nd.instAc.erase(t);
        break;
    }
}

namespace {

struct TupleHash {
    size_t operator()(const Tuple& t) const noexcept {
        uint64_t h = 1469598103934665603ull;
        for (ConstId c : t) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

// Visit order and BFS predecessor for a traversal of the (undirected) tree
// starting anywhere.
void bfs_from(const HypertreeDecomposition& hd, uint32_t start, std::vector<uint32_t>& order,
              std::vector<int32_t>& pred) {
    const size_t n = hd.nodes.size();
    std::vector<std::vector<uint32_t>> adjacent(n);
    for (uint32_t i = 0; i < hd.parent.size(); ++i)
        if (hd.parent[i] >= 0) {
            adjacent[i].push_back(static_cast<uint32_t>(hd.parent[i]));
            adjacent[hd.parent[i]].push_back(i);
        }
    order.clear();
    pred.assign(n, -1);
    std::vector<char> seen(n, 0);
    order.push_back(start);
    seen[start] = 1;
    for (size_t qi = 0; qi < order.size(); ++qi)
        for (uint32_t next : adjacent[order[qi]])
            if (!seen[next]) {
                seen[next] = 1;
                pred[next] = static_cast<int32_t>(order[qi]);
                order.push_back(next);
            }
}

std::vector<size_t> shared_positions(const std::vector<VarId>& of, const std::vector<VarId>& with) {
    std::vector<size_t> out;
    for (size_t i = 0; i < of.size(); ++i)
        if (std::find(with.begin(), with.end(), of[i]) != with.end())
            out.push_back(i);
    return out;
}

Tuple project(const Tuple& t, const std::vector<size_t>& positions) {
    Tuple out;
    out.reserve(positions.size());
    for (size_t pos : positions)
        out.push_back(t[pos]);
    return out;
}

// target := target semijoin source on the shared variables. With no shared
// variables the source acts as an existence filter only. Probes run from the
// source side against a hash index of the target, so the counted work tracks
// the (delta-sized) source set rather than the stored instantiations.
void semijoin_reduce(TupleSet& target, const std::vector<VarId>& target_chi,
                     const TupleSet& source, const std::vector<VarId>& source_chi,
                     EvalCounters* counters) {
    const std::vector<size_t> target_pos = shared_positions(target_chi, source_chi);
    if (target_pos.empty()) {
        if (source.empty())
            target.clear();
        return;
    }
    const std::vector<size_t> source_pos = shared_positions(source_chi, target_chi);
    // source_chi's shared vars in target order, so the key tuples align.
    std::vector<size_t> aligned;
    aligned.reserve(source_pos.size());
    for (size_t tp : target_pos) {
        VarId v = target_chi[tp];
        for (size_t sp : source_pos)
            if (source_chi[sp] == v) {
                aligned.push_back(sp);
                break;
            }
    }
    std::unordered_map<Tuple, std::vector<const Tuple*>, TupleHash> buckets;
    buckets.reserve(target.size());
    for (const Tuple& t : target)
        buckets[project(t, target_pos)].push_back(&t);
    TupleSet kept;
    for (const Tuple& s : source) {
        if (counters)
            counters->substitutions++;
        auto it = buckets.find(project(s, aligned));
        if (it == buckets.end())
            continue;
        for (const Tuple* t : it->second)
            kept.insert(*t);
        it->second.clear();
    }
    target = std::move(kept);
}

struct JoinTable {
    std::vector<VarId> schema;
    std::unordered_map<Tuple, int64_t, TupleHash> rows;
};

JoinTable join_tables(JoinTable left, const JoinTable& right, EvalCounters* counters) {
    std::vector<size_t> left_key, right_key, right_extra;
    for (size_t j = 0; j < right.schema.size(); ++j) {
        auto it = std::find(left.schema.begin(), left.schema.end(), right.schema[j]);
        if (it == left.schema.end())
            right_extra.push_back(j);
    }
    for (size_t i = 0; i < left.schema.size(); ++i) {
        auto it = std::find(right.schema.begin(), right.schema.end(), left.schema[i]);
        if (it != right.schema.end()) {
            left_key.push_back(i);
            right_key.push_back(static_cast<size_t>(it - right.schema.begin()));
        }
    }
    std::unordered_map<Tuple, std::vector<std::pair<const Tuple*, int64_t>>, TupleHash> index;
    index.reserve(right.rows.size());
    for (const auto& [t, m] : right.rows)
        index[project(t, right_key)].emplace_back(&t, m);
    JoinTable out;
    out.schema = std::move(left.schema);
    for (size_t j : right_extra)
        out.schema.push_back(right.schema[j]);
    for (const auto& [t, m] : left.rows) {
        auto it = index.find(project(t, left_key));
        if (it == index.end())
            continue;
        for (const auto& [rt, rm] : it->second) {
            if (counters)
                counters->substitutions++;
            Tuple row = t;
            row.reserve(out.schema.size());
            for (size_t j : right_extra)
                row.push_back((*rt)[j]);
            out.rows[std::move(row)] += m * rm;
        }
    }
    return out;
}

JoinTable project_keep(JoinTable in, const std::function<bool(VarId)>& keep) {
    std::vector<size_t> positions;
    std::vector<VarId> schema;
    for (size_t i = 0; i < in.schema.size(); ++i)
        if (keep(in.schema[i])) {
            positions.push_back(i);
            schema.push_back(in.schema[i]);
        }
    if (schema.size() == in.schema.size())
        return in;
    JoinTable out;
    out.schema = std::move(schema);
    for (const auto& [t, m] : in.rows)
        out.rows[project(t, positions)] += m;
    return out;
}

} // namespace

std::map<Tuple, int64_t> cross_node_join(const Rule& rule, const NodeStore& ns,
                                         EvalCounters* counters) {
    const std::vector<VarId> head = rule.head_vars();
    auto is_head_var = [&](VarId v) {
        return std::find(head.begin(), head.end(), v) != head.end();
    };
    const auto children = ns.hd.children();

    // Children before parents, so each child's projected table is ready when
    // its parent joins.
    std::vector<uint32_t> order;
    std::vector<int32_t> pred;
    bfs_from(ns.hd, 0, order, pred);

    std::vector<JoinTable> table(ns.nodes.size());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const uint32_t p = *it;
        JoinTable t;
        t.schema = ns.hd.nodes[p].chi;
        for (const Tuple& tuple : ns.nodes[p].instAc)
            t.rows.emplace(tuple, 1);
        for (uint32_t c : children[p]) {
            t = join_tables(std::move(t), table[c], counters);
            table[c] = {};
        }
        const auto& chi = ns.hd.nodes[p].chi;
        t = project_keep(std::move(t), [&](VarId v) {
            return is_head_var(v) || std::find(chi.begin(), chi.end(), v) != chi.end();
        });
        table[p] = std::move(t);
    }

    // Root result in head-variable order.
    JoinTable& root = table[0];
    std::vector<size_t> positions;
    positions.reserve(head.size());
    for (VarId v : head) {
        auto it = std::find(root.schema.begin(), root.schema.end(), v);
        if (it == root.schema.end())
            throw std::logic_error("head variable missing from the cross-node join result");
        positions.push_back(static_cast<size_t>(it - root.schema.begin()));
    }
    std::map<Tuple, int64_t> out;
    for (const auto& [t, m] : root.rows)
        out[project(t, positions)] += m;
    return out;
}

FactCounts cross_node_evaluation(const Rule& rule, NodeStore& ns, LabelSign sign,
                                 EvalCounters* counters, const CrossNodeOptions& options) {
    FactCounts out;
    const uint32_t n = static_cast<uint32_t>(ns.nodes.size());
    const std::vector<VarId> head = rule.head_vars();
    std::vector<size_t> head_slot(rule.head.args.size(), 0);
    for (size_t i = 0; i < rule.head.args.size(); ++i)
        if (rule.head.args[i].is_var())
            head_slot[i] = static_cast<size_t>(
                std::find(head.begin(), head.end(), rule.head.args[i].id) - head.begin());

    for (uint32_t pivot = 0; pivot < n; ++pivot) {
        // A pivot with no delta tuples contributes nothing (its own active set
        // is empty); skip it before paying for the active-set copies.
        const auto& pd = sign == LabelSign::Plus ? ns.nodes[pivot].instPlus
                                                 : ns.nodes[pivot].instMinus;
        if (pd.empty() && !options.on_pivot)
            continue;
        for (uint32_t j = 0; j < n; ++j)
            set_active(ns, j, label_for(sign, pivot, j));
        if (options.on_pivot)
            options.on_pivot(pivot, ns);
        size_t max_active = 0;
        bool any_empty = false;
        for (const auto& nd : ns.nodes) {
            max_active = std::max(max_active, nd.instAc.size());
            any_empty = any_empty || nd.instAc.empty();
        }
        if (any_empty)
            continue;
        if (options.full_reducer) {
            if (!options.pivot_pass_heuristic ||
                ns.nodes[pivot].instAc.size() * 3 < max_active)
                top_down_lsj(ns, pivot, counters);
            bottom_up_lsj(ns, 0, counters);
            top_down_lsj(ns, 0, counters);
        }
        for (const auto& [tuple, mult] : cross_node_join(rule, ns, counters)) {
            Fact f;
            f.pred = rule.head.pred;
            f.args.reserve(rule.head.args.size());
            for (size_t i = 0; i < rule.head.args.size(); ++i) {
                const Term& term = rule.head.args[i];
                f.args.push_back(term.is_const() ? term.id : tuple[head_slot[i]]);
            }
            out[std::move(f)] += mult;
        }
    }
    return out;
}

void top_down_lsj(NodeStore& ns, uint32_t root, EvalCounters* counters) {
    std::vector<uint32_t> order;
    std::vector<int32_t> pred;
    bfs_from(ns.hd, root, order, pred);
    for (size_t i = 1; i < order.size(); ++i) {
        const uint32_t q = order[i];
        const uint32_t p = static_cast<uint32_t>(pred[q]);
        semijoin_reduce(ns.nodes[q].instAc, ns.hd.nodes[q].chi, ns.nodes[p].instAc,
                        ns.hd.nodes[p].chi, counters);
    }
}

void bottom_up_lsj(NodeStore& ns, uint32_t root, EvalCounters* counters) {
    std::vector<uint32_t> order;
    std::vector<int32_t> pred;
    bfs_from(ns.hd, root, order, pred);
    for (size_t i = order.size(); i-- > 1;) {
        const uint32_t q = order[i];
        const uint32_t p = static_cast<uint32_t>(pred[q]);
        semijoin_reduce(ns.nodes[p].instAc, ns.hd.nodes[p].chi, ns.nodes[q].instAc,
                        ns.hd.nodes[q].chi, counters);
    }
}

FactSet hd_add(const Rule& rule, const FactStore& store, NodeStore& ns,
               DerivationCountTable* counts, EvalCounters* counters,
               const CrossNodeOptions& options, const NodeStoreHook& hook) {
    for (size_t p = 0; p < ns.nodes.size(); ++p) {
        auto& nd = ns.nodes[p];
        for (auto& [t, m] : pi_p(rule, ns.hd.nodes[p], store, counters)) {
            nd.tupleCounts[t] += m;
            if (!nd.instI.contains(t))
                nd.instPlus.insert(t);
        }
    }
    FactCounts derived = cross_node_evaluation(rule, ns, LabelSign::Plus, counters, options);
    if (counts)
        for (const auto& [f, m] : derived)
            counts->add(f, rule.ordinal, m);
    if (hook)
        hook(rule, ns);
    for (auto& nd : ns.nodes) {
        nd.instI.insert(nd.instPlus.begin(), nd.instPlus.end());
        nd.instPlus.clear();
    }
    FactSet out;
    for (const auto& [f, m] : derived)
        if (!store.contains(f))
            out.insert(f);
    return out;
}

FactSet hd_del(const Rule& rule, const FactStore& store, NodeStore& ns,
               DerivationCountTable* counts, EvalCounters* counters,
               const CrossNodeOptions& options, const NodeStoreHook& hook) {
    for (size_t p = 0; p < ns.nodes.size(); ++p) {
        auto& nd = ns.nodes[p];
        for (auto& [t, m] : pi_p(rule, ns.hd.nodes[p], store, counters)) {
            auto it = nd.tupleCounts.find(t);
            if (it == nd.tupleCounts.end() || it->second < m)
                throw std::logic_error("node tuple support below zero");
            it->second -= m;
            if (it->second == 0) {
                nd.tupleCounts.erase(it);
                if (nd.instI.contains(t)) {
                    nd.instMinus.insert(t);
                    nd.instRe.insert(t);
                }
            }
        }
    }
    FactCounts dying = cross_node_evaluation(rule, ns, LabelSign::Minus, counters, options);
    if (counts)
        for (const auto& [f, m] : dying)
            counts->add(f, rule.ordinal, -m);
    if (hook)
        hook(rule, ns);
    for (auto& nd : ns.nodes) {
        for (const Tuple& t : nd.instMinus)
            nd.instI.erase(t);
        nd.instMinus.clear();
    }
    FactSet out;
    for (const auto& [f, m] : dying)
        if (store.contains(f) && store.region_of(f) == Region::Old)
            out.insert(f);
    return out;
}

FactSet hd_red(const Rule& rule, const FactStore& store, NodeStore& ns, const FactSet& delta,
               DerivationCountTable& counts, EvalCounters* counters,
               const CrossNodeOptions& options, const NodeStoreHook& hook) {
    (void)store;
    for (auto& nd : ns.nodes)
        for (const Tuple& t : nd.instRe) {
            auto it = nd.tupleCounts.find(t);
            if (it != nd.tupleCounts.end() && it->second > 0)
                nd.instPlus.insert(t);
        }
    FactCounts revived = cross_node_evaluation(rule, ns, LabelSign::Plus, counters, options);
    for (const auto& [f, m] : revived)
        counts.add(f, rule.ordinal, m);
    if (hook)
        hook(rule, ns);
    FactSet out;
    for (const auto& [f, m] : revived)
        if (delta.contains(f))
            out.insert(f);
    for (auto& nd : ns.nodes) {
        nd.instI.insert(nd.instPlus.begin(), nd.instPlus.end());
        nd.instPlus.clear();
        nd.instRe.clear();
    }
    for (const Fact& f : delta)
        if (counts.count(f, rule.ordinal) > 0)
            out.insert(f);
    return out;
}

std::string dump_node_store(const Vocabulary& vocab, const Rule& rule, const NodeStore& ns) {
    std::string out;
    auto render = [&](const Tuple& t) {
        std::string s = "(";
        for (size_t i = 0; i < t.size(); ++i) {
            if (i)
                s += ',';
            s += vocab.constant_text(t[i]);
        }
        s += ')';
        return s;
    };
    const std::pair<const char*, const TupleSet NodeStore::NodeSets::*> sets[] = {
        {"instI", &NodeStore::NodeSets::instI},       {"instPlus", &NodeStore::NodeSets::instPlus},
        {"instMinus", &NodeStore::NodeSets::instMinus}, {"instAc", &NodeStore::NodeSets::instAc},
        {"instRe", &NodeStore::NodeSets::instRe},
    };
    for (size_t p = 0; p < ns.nodes.size(); ++p)
        for (const auto& [name, member] : sets) {
            std::vector<std::string> items;
            for (const Tuple& t : ns.nodes[p].*member)
                items.push_back(render(t));
            std::sort(items.begin(), items.end());
            out += "inst " + rule.id + " " + std::to_string(p + 1) + " " + name + " {";
            for (size_t i = 0; i < items.size(); ++i) {
                if (i)
                    out += ';';
                out += items[i];
            }
            out += "}\n";
        }
    return out;
}

std::string check_node_store(const Rule& rule, const FactStore& store, const NodeStore& ns,
                             EvalCounters* counters) {
    for (size_t p = 0; p < ns.nodes.size(); ++p) {
        const DecompNode& node = ns.hd.nodes[p];
        TupleCounts expected;
        Binding binding(rule.num_vars(), kNoBinding);
        const std::vector<Scope> scopes(node.atoms.size(), Scope::All);
        for_each_match(rule, node.atoms, scopes, store, binding, counters,
                       [&](const Binding& b) {
                           Tuple t;
                           t.reserve(node.chi.size());
                           for (VarId v : node.chi)
                               t.push_back(b[v]);
                           expected[std::move(t)] += 1;
                       });
        const auto& nd = ns.nodes[p];
        if (nd.tupleCounts != expected)
            return "rule " + rule.id + " node " + std::to_string(p + 1) +
                   ": tuple support counts differ from the recomputed in-node join";
        if (nd.instI.size() != expected.size())
            return "rule " + rule.id + " node " + std::to_string(p + 1) +
                   ": instI size differs from the recomputed in-node join";
        for (const auto& [t, m] : expected)
            if (!nd.instI.contains(t))
                return "rule " + rule.id + " node " + std::to_string(p + 1) +
                       ": instI misses a tuple of the recomputed in-node join";
    }
    return {};
}

} // namespace hdlog
