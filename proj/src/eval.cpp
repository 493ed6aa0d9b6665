#include "hdlog/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace hdlog {

Fact instantiate(const Rule& rule, const Atom& atom, const Binding& binding) {
    Fact f;
    f.pred = atom.pred;
    f.args.reserve(atom.args.size());
    for (const Term& t : atom.args) {
        if (t.is_const()) {
            f.args.push_back(t.id);
        } else {
            const ConstId c = binding.at(t.id);
            if (c == kNoBinding)
                throw std::logic_error("unbound variable " + rule.var_names[t.id] +
                                       " while instantiating atom");
            f.args.push_back(c);
        }
    }
    return f;
}

namespace {

// fn returns false to stop the enumeration.
bool match_rec(const Rule& rule, std::span<const uint32_t> atom_indices,
               std::span<const Scope> scopes, size_t depth, const FactStore& store,
               Binding& binding, EvalCounters* counters,
               const std::function<bool(const Binding&)>& fn) {
    if (depth == atom_indices.size())
        return fn(binding);
    const Atom& atom = rule.body[atom_indices[depth]];
    std::vector<FactStore::BoundArg> bound;
    for (uint32_t pos = 0; pos < atom.args.size(); ++pos) {
        const Term& t = atom.args[pos];
        if (t.is_const())
            bound.emplace_back(pos, t.id);
        else if (binding[t.id] != kNoBinding)
            bound.emplace_back(pos, binding[t.id]);
    }
    bool keep_going = true;
    store.candidates(atom.pred, bound, scopes[depth], [&](std::span<const ConstId> row) {
        if (!keep_going)
            return;
        // Bind the free positions; repeated fresh variables must agree.
        std::vector<VarId> newly_bound;
        bool ok = true;
        for (uint32_t pos = 0; ok && pos < atom.args.size(); ++pos) {
            const Term& t = atom.args[pos];
            if (t.is_const())
                continue;
            if (binding[t.id] == kNoBinding) {
                binding[t.id] = row[pos];
                newly_bound.push_back(t.id);
            } else {
                ok = binding[t.id] == row[pos];
            }
        }
        if (ok) {
            if (counters)
                counters->substitutions++;
            keep_going =
                match_rec(rule, atom_indices, scopes, depth + 1, store, binding, counters, fn);
        }
        for (VarId v : newly_bound)
            binding[v] = kNoBinding;
    });
    return keep_going;
}

} // namespace

void for_each_match(const Rule& rule, std::span<const uint32_t> atom_indices,
                    std::span<const Scope> scopes, const FactStore& store, Binding& binding,
                    EvalCounters* counters, const std::function<void(const Binding&)>& fn) {
    if (atom_indices.size() != scopes.size())
        throw std::logic_error("atom/scope arity mismatch in for_each_match");
    match_rec(rule, atom_indices, scopes, 0, store, binding, counters, [&](const Binding& b) {
        fn(b);
        return true;
    });
}

bool exists_match(const Rule& rule, std::span<const uint32_t> atom_indices,
                  std::span<const Scope> scopes, const FactStore& store, Binding& binding,
                  EvalCounters* counters) {
    return !match_rec(rule, atom_indices, scopes, 0, store, binding, counters,
                      [](const Binding&) { return false; });
}

FactSet apply_rule(const Rule& rule, const FactStore& store, EvalCounters* counters) {
    FactSet out;
    std::vector<uint32_t> atoms(rule.body.size());
    for (uint32_t i = 0; i < atoms.size(); ++i)
        atoms[i] = i;
    std::vector<Scope> scopes(rule.body.size(), Scope::All);
    Binding binding(rule.num_vars(), kNoBinding);
    for_each_match(rule, atoms, scopes, store, binding, counters,
                   [&](const Binding& b) { out.insert(instantiate(rule, rule.head, b)); });
    return out;
}

std::vector<Binding> eval_body_labeled(const Rule& rule, size_t i, const FactStore& store,
                                       EvalCounters* counters) {
    if (i >= rule.body.size())
        throw std::out_of_range("labelled evaluation index " + std::to_string(i) +
                                " out of range for body of size " +
                                std::to_string(rule.body.size()));
    std::vector<uint32_t> atoms(rule.body.size());
    std::vector<Scope> scopes(rule.body.size());
    for (uint32_t k = 0; k < rule.body.size(); ++k) {
        atoms[k] = k;
        scopes[k] = k < i ? Scope::OldOnly : (k == i ? Scope::DeltaOnly : Scope::All);
    }
    std::vector<Binding> out;
    Binding binding(rule.num_vars(), kNoBinding);
    for_each_match(rule, atoms, scopes, store, binding, counters,
                   [&](const Binding& b) { out.push_back(b); });
    // Matches are produced once each: scopes partition the search space per
    // atom, so no dedup pass is needed; sort for deterministic output.
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace hdlog
