#include "hdlog/decomp.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace hdlog {

std::vector<std::vector<uint32_t>> HypertreeDecomposition::children() const {
    std::vector<std::vector<uint32_t>> out(nodes.size());
    for (uint32_t i = 0; i < parent.size(); ++i)
        if (parent[i] >= 0)
            out[parent[i]].push_back(i);
    return out;
}

std::vector<VarId> atoms_vars(const Rule& rule, const std::vector<uint32_t>& atoms) {
    std::vector<VarId> out;
    for (uint32_t idx : atoms)
        for (const Term& t : rule.body.at(idx).args)
            if (t.is_var() && std::find(out.begin(), out.end(), t.id) == out.end())
                out.push_back(t.id);
    return out;
}

namespace {

bool contains_all(const std::vector<VarId>& super, const std::vector<VarId>& sub) {
    for (VarId v : sub)
        if (std::find(super.begin(), super.end(), v) == super.end())
            return false;
    return true;
}

bool contains(const std::vector<VarId>& vars, VarId v) {
    return std::find(vars.begin(), vars.end(), v) != vars.end();
}

} // namespace

DecompCheck check_decomposition(const Rule& rule, const HypertreeDecomposition& hd) {
    DecompCheck res;
    auto fail = [&](std::string why) {
        res.ok = false;
        res.violation = std::move(why);
        return res;
    };

    const size_t n = hd.nodes.size();
    if (n == 0 || hd.parent.size() != n)
        return fail("malformed decomposition: empty or parent size mismatch");
    size_t roots = 0;
    for (size_t i = 0; i < n; ++i) {
        if (hd.parent[i] < 0)
            roots++;
        else if (static_cast<size_t>(hd.parent[i]) >= n)
            return fail("malformed decomposition: parent out of range");
        for (uint32_t a : hd.nodes[i].atoms)
            if (a >= rule.body.size())
                return fail("malformed decomposition: atom index out of range");
    }
    if (roots != 1)
        return fail("malformed decomposition: expected exactly one root");
    for (size_t i = 0; i < n; ++i) {
        size_t steps = 0;
        for (int32_t p = hd.parent[i]; p >= 0; p = hd.parent[p])
            if (++steps > n)
                return fail("malformed decomposition: parent chain has a cycle");
    }

    std::vector<std::vector<VarId>> lambda_vars(n);
    for (size_t i = 0; i < n; ++i)
        lambda_vars[i] = atoms_vars(rule, hd.nodes[i].atoms);

    // Condition 1: every body atom's variables fit inside some chi(p).
    for (uint32_t a = 0; a < rule.body.size(); ++a) {
        const std::vector<VarId> vars = atoms_vars(rule, {a});
        bool covered = false;
        for (size_t i = 0; !covered && i < n; ++i)
            covered = contains_all(hd.nodes[i].chi, vars);
        if (!covered)
            return fail("condition 1: body atom " + std::to_string(a + 1) +
                        " is covered by no node");
    }

    // Condition 2: the nodes holding each variable form a connected subtree.
    // Connected iff exactly one holder has no holder parent.
    for (VarId v = 0; v < rule.num_vars(); ++v) {
        std::vector<char> has(n, 0);
        size_t count = 0;
        for (size_t i = 0; i < n; ++i)
            if (contains(hd.nodes[i].chi, v)) {
                has[i] = 1;
                count++;
            }
        if (count <= 1)
            continue;
        size_t anchors = 0;
        for (size_t i = 0; i < n; ++i)
            if (has[i] && (hd.parent[i] < 0 || !has[hd.parent[i]]))
                anchors++;
        if (anchors != 1)
            return fail("condition 2: variable " + rule.var_names[v] +
                        " induces a disconnected subtree");
    }

    // Condition 3: chi(p) within var(lambda(p)).
    for (size_t i = 0; i < n; ++i)
        for (VarId v : hd.nodes[i].chi)
            if (!contains(lambda_vars[i], v))
                return fail("condition 3: variable " + rule.var_names[v] + " in chi(p" +
                            std::to_string(i + 1) + ") but not in var(lambda(p" +
                            std::to_string(i + 1) + "))");

    // Condition 4: var(lambda(p)) meeting chi of p's subtree stays in chi(p).
    std::vector<std::vector<VarId>> chi_subtree(n);
    for (size_t i = 0; i < n; ++i)
        chi_subtree[i] = hd.nodes[i].chi;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> depth(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (int32_t p = hd.parent[i]; p >= 0; p = hd.parent[p])
            depth[i]++;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] > depth[b]; });
    for (int i : order)
        if (hd.parent[i] >= 0)
            for (VarId v : chi_subtree[i])
                if (!contains(chi_subtree[hd.parent[i]], v))
                    chi_subtree[hd.parent[i]].push_back(v);
    for (size_t i = 0; i < n; ++i)
        for (VarId v : lambda_vars[i])
            if (contains(chi_subtree[i], v) && !contains(hd.nodes[i].chi, v))
                return fail("condition 4: variable " + rule.var_names[v] + " of lambda(p" +
                            std::to_string(i + 1) + ") appears below p" + std::to_string(i + 1) +
                            " but not in chi(p" + std::to_string(i + 1) + ")");
    return res;
}

uint32_t width(const HypertreeDecomposition& hd) {
    uint32_t w = 0;
    for (const DecompNode& node : hd.nodes)
        w = std::max(w, static_cast<uint32_t>(node.atoms.size()));
    return w;
}

namespace {

struct SizeEstimate {
    double tuples = 1.0;
    std::unordered_map<VarId, double> distinct; // per variable
};

double clamp_v(double v, double tuples) {
    return std::max(1.0, std::min(v, std::max(tuples, 1.0)));
}

// Base estimate for one atom: constants and repeated variables are applied as
// textbook selections over the per-position distinct counts.
SizeEstimate atom_estimate(const Vocabulary& vocab, const Rule& rule, const Atom& atom,
                           const RelationStats& stats) {
    const RelationStats::PredStats* ps = stats.find(atom.pred);
    if (!ps)
        throw std::runtime_error("rule " + rule.id + ": no statistics for predicate '" +
                                 std::string(vocab.predicate_name(atom.pred)) + "'");
    SizeEstimate est;
    est.tuples = static_cast<double>(ps->tuples);
    for (size_t pos = 0; pos < atom.args.size(); ++pos) {
        const double v_pos =
            clamp_v(pos < ps->distinct.size() ? static_cast<double>(ps->distinct[pos])
                                              : est.tuples,
                    static_cast<double>(ps->tuples));
        const Term& t = atom.args[pos];
        if (t.is_const()) {
            est.tuples = std::max(1.0, est.tuples / v_pos);
        } else if (auto it = est.distinct.find(t.id); it != est.distinct.end()) {
            // Repeated variable within the atom: equality selection.
            est.tuples = std::max(1.0, est.tuples / std::max(it->second, v_pos));
            it->second = std::min(it->second, v_pos);
        } else {
            est.distinct.emplace(t.id, v_pos);
        }
    }
    for (auto& [v, d] : est.distinct)
        d = clamp_v(d, est.tuples);
    return est;
}

SizeEstimate join_estimate(const SizeEstimate& left, const SizeEstimate& right) {
    SizeEstimate out;
    out.tuples = left.tuples * right.tuples;
    for (const auto& [v, dl] : left.distinct) {
        auto it = right.distinct.find(v);
        if (it != right.distinct.end())
            out.tuples /= std::max(dl, it->second);
    }
    out.tuples = std::max(1.0, out.tuples);
    out.distinct = left.distinct;
    for (const auto& [v, dr] : right.distinct) {
        auto [it, fresh] = out.distinct.emplace(v, dr);
        if (!fresh)
            it->second = std::min(it->second, dr);
    }
    for (auto& [v, d] : out.distinct)
        d = clamp_v(d, out.tuples);
    return out;
}

// In-node term (sum of intermediate join sizes, left to right) and final node
// size estimate.
std::pair<double, double> node_cost(const Vocabulary& vocab, const Rule& rule,
                                    const DecompNode& node, const RelationStats& stats) {
    double intermediate_sum = 0.0;
    SizeEstimate acc;
    bool first = true;
    for (uint32_t idx : node.atoms) {
        SizeEstimate atom = atom_estimate(vocab, rule, rule.body[idx], stats);
        if (first) {
            acc = std::move(atom);
            first = false;
        } else {
            acc = join_estimate(acc, atom);
            intermediate_sum += acc.tuples;
        }
    }
    return {intermediate_sum, first ? 0.0 : acc.tuples};
}

} // namespace

double estimate_cost(const Vocabulary& vocab, const Rule& rule, const HypertreeDecomposition& hd,
                     const RelationStats& stats) {
    double cost = 0.0;
    std::vector<double> node_size(hd.nodes.size(), 0.0);
    for (size_t i = 0; i < hd.nodes.size(); ++i) {
        auto [innode, size] = node_cost(vocab, rule, hd.nodes[i], stats);
        cost += innode;
        node_size[i] = size;
    }
    for (size_t i = 0; i < hd.nodes.size(); ++i)
        if (hd.parent[i] >= 0)
            cost += 2.0 * (node_size[i] + node_size[hd.parent[i]]);
    return cost;
}

namespace {

// Maximum shared-variable-weight spanning tree over the blocks (Kruskal,
// deterministic tie-break). If the blocks admit any tree satisfying the
// connectedness condition, a maximum-weight tree satisfies it too, so testing
// this one tree per partition is exhaustive at the partition level.
HypertreeDecomposition connect_blocks(std::vector<DecompNode> nodes) {
    const uint32_t n = static_cast<uint32_t>(nodes.size());
    struct Edge {
        uint32_t a, b;
        size_t weight;
    };
    std::vector<Edge> edges;
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + 1; j < n; ++j) {
            size_t shared = 0;
            for (VarId v : nodes[i].chi)
                shared += contains(nodes[j].chi, v);
            edges.push_back({i, j, shared});
        }
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (x.weight != y.weight)
            return x.weight > y.weight;
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    std::vector<uint32_t> find(n);
    std::iota(find.begin(), find.end(), 0);
    auto root_of = [&](uint32_t x) {
        while (find[x] != x)
            x = find[x] = find[find[x]];
        return x;
    };
    std::vector<std::vector<uint32_t>> adjacent(n);
    for (const Edge& e : edges) {
        uint32_t ra = root_of(e.a), rb = root_of(e.b);
        if (ra == rb)
            continue;
        find[ra] = rb;
        adjacent[e.a].push_back(e.b);
        adjacent[e.b].push_back(e.a);
    }
    HypertreeDecomposition hd;
    hd.nodes = std::move(nodes);
    hd.parent.assign(n, -1);
    if (n == 0)
        return hd;
    std::vector<char> seen(n, 0);
    std::vector<uint32_t> queue{0};
    seen[0] = 1;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        const uint32_t at = queue[qi];
        for (uint32_t next : adjacent[at])
            if (!seen[next]) {
                seen[next] = 1;
                hd.parent[next] = static_cast<int32_t>(at);
                queue.push_back(next);
            }
    }
    return hd;
}

std::vector<DecompNode> blocks_to_nodes(const Rule& rule,
                                        const std::vector<std::vector<uint32_t>>& blocks) {
    std::vector<DecompNode> nodes;
    nodes.reserve(blocks.size());
    for (const auto& block : blocks) {
        DecompNode node;
        node.atoms = block;
        std::sort(node.atoms.begin(), node.atoms.end());
        node.chi = atoms_vars(rule, node.atoms);
        nodes.push_back(std::move(node));
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const DecompNode& a, const DecompNode& b) { return a.atoms[0] < b.atoms[0]; });
    return nodes;
}

// All set partitions of {0..m-1} into blocks of at most max_block atoms.
void for_each_partition(uint32_t m, uint32_t max_block,
                        const std::function<void(const std::vector<std::vector<uint32_t>>&)>& fn) {
    std::vector<std::vector<uint32_t>> blocks;
    auto rec = [&](auto&& self, uint32_t element) -> void {
        if (element == m) {
            fn(blocks);
            return;
        }
        for (auto& block : blocks) {
            if (block.size() < max_block) {
                block.push_back(element);
                self(self, element + 1);
                block.pop_back();
            }
        }
        blocks.push_back({element});
        self(self, element + 1);
        blocks.pop_back();
    };
    rec(rec, 0);
}

std::string lambda_key(const HypertreeDecomposition& hd) {
    std::string key;
    for (const DecompNode& node : hd.nodes) {
        key += '|';
        for (uint32_t idx : node.atoms) {
            key += ' ';
            key += std::to_string(idx);
        }
    }
    return key;
}

} // namespace

HypertreeDecomposition decompose(const Vocabulary& vocab, const Rule& rule,
                                 const RelationStats& stats, const DecomposeOptions& options) {
    const uint32_t m = static_cast<uint32_t>(rule.body.size());
    if (m > options.max_atoms)
        throw std::runtime_error("decomposition search space exceeded for rule " + rule.id + ": " +
                                 std::to_string(m) + " body atoms > bound " +
                                 std::to_string(options.max_atoms));

    for (uint32_t w = 1; w <= options.max_width; ++w) {
        bool found = false;
        double best_cost = std::numeric_limits<double>::infinity();
        size_t best_nodes = 0;
        std::string best_key;
        HypertreeDecomposition best;
        for_each_partition(m, w, [&](const std::vector<std::vector<uint32_t>>& blocks) {
            HypertreeDecomposition hd = connect_blocks(blocks_to_nodes(rule, blocks));
            if (!check_decomposition(rule, hd))
                return;
            const double cost = estimate_cost(vocab, rule, hd, stats);
            const std::string key = lambda_key(hd);
            const bool better =
                !found || cost < best_cost ||
                (cost == best_cost &&
                 (hd.nodes.size() < best_nodes ||
                  (hd.nodes.size() == best_nodes && key < best_key)));
            if (better) {
                found = true;
                best_cost = cost;
                best_nodes = hd.nodes.size();
                best_key = key;
                best = std::move(hd);
            }
        });
        if (found)
            return best;
    }

    // Nothing valid within the width bound: the whole body as a single node
    // is always a valid decomposition.
    std::vector<std::vector<uint32_t>> all(1);
    all[0].resize(m);
    std::iota(all[0].begin(), all[0].end(), 0);
    return connect_blocks(blocks_to_nodes(rule, all));
}

bool is_complex(const Rule& rule, const DecomposeOptions& options) {
    if (rule.body.size() > options.max_atoms)
        throw std::runtime_error("decomposition search space exceeded for rule " + rule.id + ": " +
                                 std::to_string(rule.body.size()) + " body atoms > bound " +
                                 std::to_string(options.max_atoms));
    std::vector<std::vector<uint32_t>> singletons;
    for (uint32_t i = 0; i < rule.body.size(); ++i)
        singletons.push_back({i});
    HypertreeDecomposition hd = connect_blocks(blocks_to_nodes(rule, singletons));
    return !check_decomposition(rule, hd).ok;
}

std::string dump_decomposition(const Vocabulary& vocab, const Rule& rule,
                               const HypertreeDecomposition& hd) {
    std::string out;
    for (size_t i = 0; i < hd.nodes.size(); ++i) {
        out += "node " + std::to_string(i + 1);
        out += " parent=";
        out += hd.parent[i] < 0 ? "-" : std::to_string(hd.parent[i] + 1);
        out += " chi={";
        const DecompNode& node = hd.nodes[i];
        for (size_t k = 0; k < node.chi.size(); ++k) {
            if (k)
                out += ',';
            out += rule.var_names[node.chi[k]];
        }
        out += "} lambda={";
        for (size_t k = 0; k < node.atoms.size(); ++k) {
            if (k)
                out += ',';
            out += to_string(vocab, rule, rule.body[node.atoms[k]]);
        }
        out += "}\n";
    }
    return out;
}

} // namespace hdlog
