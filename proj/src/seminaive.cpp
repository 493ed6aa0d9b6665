#include "hdlog/seminaive.hpp"

namespace hdlog {

namespace {

// Enumerates every substitution with at least one body atom in the delta
// region, via the n+1 labelled evaluations; each qualifying substitution is
// seen exactly once across all i.
void for_each_delta_match(const Rule& rule, const FactStore& store, EvalCounters* counters,
                          const std::function<void(const Binding&)>& fn) {
    std::vector<uint32_t> atoms(rule.body.size());
    for (uint32_t k = 0; k < rule.body.size(); ++k)
        atoms[k] = k;
    std::vector<Scope> scopes(rule.body.size());
    Binding binding(rule.num_vars(), kNoBinding);
    for (size_t i = 0; i < rule.body.size(); ++i) {
        for (size_t k = 0; k < rule.body.size(); ++k)
            scopes[k] = k < i ? Scope::OldOnly : (k == i ? Scope::DeltaOnly : Scope::All);
        for_each_match(rule, atoms, scopes, store, binding, counters, fn);
    }
}

} // namespace

FactSet delta_apply(const Program& program, const FactStore& store, EvalCounters* counters) {
    FactSet out;
    for (const Rule& rule : program.rules)
        for_each_delta_match(rule, store, counters, [&](const Binding& b) {
            out.insert(instantiate(rule, rule.head, b));
        });
    return out;
}

FactStore mat(const Program& program, const FactSet& explicit_facts, RoundStats* stats) {
    FactStore store;
    FactSet delta = explicit_facts;
    while (!delta.empty()) {
        for (const Fact& f : delta)
            store.insert(f, Region::Delta);
        EvalCounters counters;
        FactSet derived = delta_apply(program, store, &counters);
        store.promote_delta();
        FactSet next;
        for (const Fact& f : derived)
            if (!store.contains(f))
                next.insert(f);
        if (stats)
            stats->record_round(counters.substitutions, next.size());
        delta = std::move(next);
    }
    return store;
}

FactSet std_add(const Rule& rule, const FactStore& store, DerivationCountTable* counts,
                EvalCounters* counters) {
    FactSet out;
    for_each_delta_match(rule, store, counters, [&](const Binding& b) {
        Fact head = instantiate(rule, rule.head, b);
        if (counts)
            counts->add(head, rule.ordinal, 1);
        if (!store.contains(head))
            out.insert(std::move(head));
    });
    return out;
}

FactSet std_del(const Rule& rule, const FactStore& store, DerivationCountTable* counts,
                EvalCounters* counters) {
    FactSet out;
    for_each_delta_match(rule, store, counters, [&](const Binding& b) {
        Fact head = instantiate(rule, rule.head, b);
        if (counts)
            counts->add(head, rule.ordinal, -1);
        if (store.region_of(head) == Region::Old)
            out.insert(std::move(head));
    });
    return out;
}

FactSet std_red(const Rule& rule, const FactStore& store, const FactSet& delta,
                EvalCounters* counters) {
    FactSet out;
    if (delta.empty())
        return out;
    std::vector<uint32_t> atoms(rule.body.size());
    for (uint32_t k = 0; k < rule.body.size(); ++k)
        atoms[k] = k;
    const std::vector<Scope> scopes(rule.body.size(), Scope::All);
    for (const Fact& f : delta) {
        if (f.pred != rule.head.pred || out.contains(f))
            continue;
        // One-step provability: bind the head against f, then search the body
        // for a single witnessing match.
        Binding binding(rule.num_vars(), kNoBinding);
        bool head_ok = true;
        for (size_t pos = 0; head_ok && pos < rule.head.args.size(); ++pos) {
            const Term& t = rule.head.args[pos];
            if (t.is_const())
                head_ok = t.id == f.args[pos];
            else if (binding[t.id] == kNoBinding)
                binding[t.id] = f.args[pos];
            else
                head_ok = binding[t.id] == f.args[pos];
        }
        if (!head_ok)
            continue;
        if (exists_match(rule, atoms, scopes, store, binding, counters))
            out.insert(f);
    }
    return out;
}

} // namespace hdlog
