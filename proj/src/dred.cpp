#include "hdlog/dred.hpp"

#include <chrono>
#include <cstdio>
#include <numeric>

namespace hdlog {

std::string to_string(EngineMode mode) {
    switch (mode) {
    case EngineMode::Standard:
        return "standard";
    case EngineMode::Hd:
        return "hd";
    case EngineMode::Combined:
        return "combined";
    }
    return "combined";
}

std::optional<EngineMode> parse_mode(std::string_view text) {
    if (text == "standard")
        return EngineMode::Standard;
    if (text == "hd")
        return EngineMode::Hd;
    if (text == "combined")
        return EngineMode::Combined;
    return std::nullopt;
}

std::vector<std::string> UpdateReport::report_lines() const {
    std::vector<std::string> out;
    auto num = [&](const char* key, uint64_t value) {
        out.push_back(std::string(key) + "=" + std::to_string(value));
    };
    auto secs = [&](const char* key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%.6f", key, value);
        out.emplace_back(buf);
    };
    num("explicit_added", explicit_added);
    num("explicit_removed", explicit_removed);
    num("overdeleted", overdeleted);
    num("rederived", rederived);
    num("added", added);
    num("removed", removed);
    secs("overdelete_seconds", overdelete_seconds);
    secs("rederive_seconds", rederive_seconds);
    secs("add_seconds", add_seconds);
    for (auto& line : del_rounds.report_lines("del_"))
        out.push_back(std::move(line));
    for (auto& line : add_rounds.report_lines("add_"))
        out.push_back(std::move(line));
    return out;
}

MaterialisationState prepare(Vocabulary vocab, Program program, const std::vector<Fact>& facts,
                             EngineOptions options) {
    MaterialisationState state;
    state.vocab = std::move(vocab);
    state.program = std::move(program);
    state.options = options;
    if (options.stats_override) {
        state.stats = *options.stats_override;
    } else {
        state.stats = RelationStats::from_facts(facts, state.vocab);
        state.stats.fill_missing(state.program, state.vocab, options.default_tuples);
    }
    const size_t n = state.program.rules.size();
    state.assignment.assign(n, RuleEngine::Std);
    state.node_stores.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const Rule& rule = state.program.rules[i];
        const bool use_hd = options.mode == EngineMode::Hd ||
                            (options.mode == EngineMode::Combined && is_complex(rule));
        if (use_hd) {
            state.assignment[i] = RuleEngine::Hd;
            state.node_stores[i] = NodeStore(decompose(state.vocab, rule, state.stats));
        }
    }
    return state;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

void apply_update(MaterialisationState& state, const UpdateRequest& request, UpdateReport* report,
                  UpdateTrace* trace) {
    using clock = std::chrono::steady_clock;
    const size_t num_rules = state.program.rules.size();
    FactSet& explicit_facts = state.counts.explicit_facts;

    // Normalise against the current explicit set; a fact both added and
    // removed in one request stays.
    FactSet eplus_raw, eplus, eminus;
    for (const Fact& f : request.adds)
        eplus_raw.insert(f);
    for (const Fact& f : request.dels)
        if (explicit_facts.contains(f) && !eplus_raw.contains(f))
            eminus.insert(f);
    for (const Fact& f : eplus_raw)
        if (!explicit_facts.contains(f))
            eplus.insert(f);
    if (report) {
        report->explicit_added = eplus.size();
        report->explicit_removed = eminus.size();
    }

    CrossNodeOptions cross;
    cross.full_reducer = state.options.full_reducer;
    cross.pivot_pass_heuristic = state.options.pivot_pass_heuristic;
    auto hook_for = [&](const char* phase, uint32_t wave) -> NodeStoreHook {
        if (!trace)
            return {};
        return [&state, trace, phase, wave](const Rule& rule, const NodeStore& ns) {
            trace->entries.push_back({phase, wave, dump_node_store(state.vocab, rule, ns)});
        };
    };

    // Overdeletion: sweep out everything whose derivation touches the wave's
    // delta, wave by wave.
    auto t0 = clock::now();
    FactSet delta_minus = eminus;
    FactSet overdeleted;
    uint32_t wave = 0;
    while (!delta_minus.empty()) {
        ++wave;
        const uint64_t subs0 = state.counters.substitutions;
        for (const Fact& f : delta_minus)
            state.store.retag(f, Region::Delta);
        FactSet affected;
        for (size_t i = 0; i < num_rules; ++i) {
            const Rule& rule = state.program.rules[i];
            FactSet out =
                state.assignment[i] == RuleEngine::Std
                    ? std_del(rule, state.store, &state.counts, &state.counters)
                    : hd_del(rule, state.store, state.node_stores[i], &state.counts,
                             &state.counters, cross, hook_for("overdelete", wave));
            affected.insert(out.begin(), out.end());
        }
        overdeleted.insert(delta_minus.begin(), delta_minus.end());
        for (const Fact& f : delta_minus)
            state.store.erase(f);
        FactSet next;
        for (const Fact& f : affected)
            if (!overdeleted.contains(f))
                next.insert(f);
        if (report)
            report->del_rounds.record_round(state.counters.substitutions - subs0, next.size());
        delta_minus = std::move(next);
    }
    if (report) {
        report->overdelete_seconds = seconds_since(t0);
        report->overdeleted = overdeleted.size() - eminus.size();
    }

    // Rederivation: one pass over the remainder, plus the overdeleted facts
    // that stay explicitly asserted.
    t0 = clock::now();
    FactSet rederived;
    for (size_t i = 0; i < num_rules; ++i) {
        const Rule& rule = state.program.rules[i];
        FactSet out = state.assignment[i] == RuleEngine::Std
                          ? std_red(rule, state.store, overdeleted, &state.counters)
                          : hd_red(rule, state.store, state.node_stores[i], overdeleted,
                                   state.counts, &state.counters, cross, hook_for("rederive", 1));
        rederived.insert(out.begin(), out.end());
    }
    for (const Fact& f : overdeleted)
        if (explicit_facts.contains(f) && !eminus.contains(f))
            rederived.insert(f);
    if (report) {
        report->rederive_seconds = seconds_since(t0);
        report->rederived = rederived.size();
    }

    // Re-addition: the rederived facts and the new explicit facts seed the
    // usual insertion waves.
    t0 = clock::now();
    FactSet delta_plus;
    for (const Fact& f : rederived)
        if (!state.store.contains(f))
            delta_plus.insert(f);
    for (const Fact& f : eplus)
        if (!state.store.contains(f))
            delta_plus.insert(f);
    FactSet added;
    wave = 0;
    while (!delta_plus.empty()) {
        ++wave;
        const uint64_t subs0 = state.counters.substitutions;
        for (const Fact& f : delta_plus)
            state.store.insert(f, Region::Delta);
        FactSet derived;
        for (size_t i = 0; i < num_rules; ++i) {
            const Rule& rule = state.program.rules[i];
            FactSet out = state.assignment[i] == RuleEngine::Std
                              ? std_add(rule, state.store, &state.counts, &state.counters)
                              : hd_add(rule, state.store, state.node_stores[i], &state.counts,
                                       &state.counters, cross, hook_for("add", wave));
            derived.insert(out.begin(), out.end());
        }
        added.insert(delta_plus.begin(), delta_plus.end());
        state.store.promote_delta();
        FactSet next;
        for (const Fact& f : derived)
            if (!state.store.contains(f))
                next.insert(f);
        if (report)
            report->add_rounds.record_round(state.counters.substitutions - subs0, next.size());
        delta_plus = std::move(next);
    }
    if (report) {
        report->add_seconds = seconds_since(t0);
        report->added = added.size();
        uint64_t removed = 0;
        for (const Fact& f : overdeleted)
            if (!added.contains(f))
                removed++;
        report->removed = removed;
    }

    for (const Fact& f : eminus)
        explicit_facts.erase(f);
    for (const Fact& f : eplus)
        explicit_facts.insert(f);

    if (trace) {
        std::string dump;
        for (size_t i = 0; i < num_rules; ++i)
            if (state.assignment[i] == RuleEngine::Hd)
                dump += dump_node_store(state.vocab, state.program.rules[i],
                                        state.node_stores[i]);
        trace->final_dump = std::move(dump);
    }
}

MaterialisationState materialise(Vocabulary vocab, Program program,
                                 const std::vector<Fact>& facts, EngineOptions options,
                                 UpdateReport* report, UpdateTrace* trace) {
    MaterialisationState state = prepare(std::move(vocab), std::move(program), facts, options);
    UpdateRequest request;
    request.adds = facts;
    apply_update(state, request, report, trace);
    return state;
}

std::string check_counts(const MaterialisationState& state) {
    DerivationCountTable expected;
    expected.explicit_facts = state.counts.explicit_facts;
    for (const Rule& rule : state.program.rules) {
        std::vector<uint32_t> atoms(rule.body.size());
        std::iota(atoms.begin(), atoms.end(), 0u);
        const std::vector<Scope> scopes(rule.body.size(), Scope::All);
        Binding binding(rule.num_vars(), kNoBinding);
        for_each_match(rule, atoms, scopes, state.store, binding, nullptr,
                       [&](const Binding& b) {
                           expected.add(instantiate(rule, rule.head, b), rule.ordinal, 1);
                       });
    }
    if (!(expected == state.counts))
        return "derivation counts differ from a from-scratch recount";
    for (size_t i = 0; i < state.program.rules.size(); ++i)
        if (state.assignment[i] == RuleEngine::Hd) {
            std::string err =
                check_node_store(state.program.rules[i], state.store, state.node_stores[i]);
            if (!err.empty())
                return err;
        }
    return {};
}

std::string check_membership(const MaterialisationState& state) {
    if (!state.store.facts(Scope::DeltaOnly).empty())
        return "store delta region not empty between updates";
    for (const Fact& f : state.store.facts())
        if (!state.counts.is_explicit(f) && state.counts.count(f) <= 0)
            return "stored fact neither explicit nor positively counted: " +
                   to_string(state.vocab, f);
    for (const auto& [f, entry] : state.counts.counts)
        if (entry.total > 0 && !state.store.contains(f))
            return "positively counted fact missing from the store: " + to_string(state.vocab, f);
    for (const Fact& f : state.counts.explicit_facts)
        if (!state.store.contains(f))
            return "explicit fact missing from the store: " + to_string(state.vocab, f);
    return {};
}

std::string check_state(const MaterialisationState& state) {
    if (std::string err = check_membership(state); !err.empty())
        return err;
    if (std::string err = check_counts(state); !err.empty())
        return err;
    FactStore fresh = mat(state.program, state.counts.explicit_facts, nullptr);
    const std::vector<Fact> current = state.store.facts();
    if (current.size() != fresh.size())
        return "materialisation differs from a from-scratch run: " +
               std::to_string(current.size()) + " facts vs " + std::to_string(fresh.size());
    for (const Fact& f : current)
        if (!fresh.contains(f))
            return "materialisation differs from a from-scratch run: extra fact " +
                   to_string(state.vocab, f);
    return {};
}

} // namespace hdlog
