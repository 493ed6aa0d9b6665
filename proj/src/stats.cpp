#include "hdlog/stats.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace hdlog {

std::vector<std::string> RoundStats::report_lines(const std::string& prefix) const {
    std::vector<std::string> out;
    out.push_back(prefix + "rounds=" + std::to_string(rounds));
    out.push_back(prefix + "substitutions_considered=" + std::to_string(substitutions_considered));
    out.push_back(prefix + "facts_derived=" + std::to_string(facts_derived));
    for (size_t i = 0; i < per_round_substitutions.size(); ++i)
        out.push_back(prefix + "round" + std::to_string(i + 1) +
                      "_substitutions=" + std::to_string(per_round_substitutions[i]));
    for (size_t i = 0; i < per_round_derived.size(); ++i)
        out.push_back(prefix + "round" + std::to_string(i + 1) +
                      "_derived=" + std::to_string(per_round_derived[i]));
    return out;
}

namespace {

void accumulate(RelationStats& stats, const Vocabulary& vocab, const Fact& fact,
                std::unordered_map<PredId, std::vector<std::unordered_set<ConstId>>>& seen) {
    auto& pred_stats = stats.preds[fact.pred];
    auto& distinct = seen[fact.pred];
    if (pred_stats.tuples == 0) {
        pred_stats.name = vocab.predicate_name(fact.pred);
        pred_stats.distinct.assign(fact.args.size(), 0);
        distinct.resize(fact.args.size());
    }
    pred_stats.tuples++;
    for (size_t pos = 0; pos < fact.args.size(); ++pos)
        if (distinct[pos].insert(fact.args[pos]).second)
            pred_stats.distinct[pos]++;
}

} // namespace

void RelationStats::fill_missing(const Program& program, const Vocabulary& vocab,
                                 uint64_t tuples) {
    auto add = [&](PredId pred) {
        auto [it, fresh] = preds.try_emplace(pred);
        if (!fresh)
            return;
        it->second.name = vocab.predicate_name(pred);
        it->second.tuples = tuples;
        it->second.distinct.assign(vocab.arity(pred), tuples);
    };
    for (const Rule& rule : program.rules) {
        add(rule.head.pred);
        for (const Atom& atom : rule.body)
            add(atom.pred);
    }
}

RelationStats RelationStats::from_store(const FactStore& store, const Vocabulary& vocab) {
    RelationStats stats;
    std::unordered_map<PredId, std::vector<std::unordered_set<ConstId>>> seen;
    store.for_each(Scope::All, [&](const Fact& f) { accumulate(stats, vocab, f, seen); });
    return stats;
}

RelationStats RelationStats::from_facts(const std::vector<Fact>& facts, const Vocabulary& vocab) {
    RelationStats stats;
    std::unordered_map<PredId, std::vector<std::unordered_set<ConstId>>> seen;
    for (const Fact& f : facts)
        accumulate(stats, vocab, f, seen);
    return stats;
}

RelationStats RelationStats::uniform(const Program& program, const Vocabulary& vocab,
                                     uint64_t tuples) {
    RelationStats stats;
    stats.fill_missing(program, vocab, tuples);
    return stats;
}

std::string dump_stats(const RelationStats& stats) {
    std::vector<const RelationStats::PredStats*> rows;
    rows.reserve(stats.preds.size());
    for (const auto& [pred, ps] : stats.preds)
        rows.push_back(&ps);
    std::sort(rows.begin(), rows.end(),
              [](const auto* a, const auto* b) { return a->name < b->name; });
    std::string out;
    for (const auto* ps : rows) {
        out += ps->name + " " + std::to_string(ps->tuples);
        for (uint64_t v : ps->distinct)
            out += " " + std::to_string(v);
        out += '\n';
    }
    return out;
}

RelationStats parse_stats(const std::string& text, Vocabulary& vocab) {
    RelationStats stats;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream row(line);
        std::string name;
        if (!(row >> name))
            continue;
        uint64_t tuples;
        if (!(row >> tuples))
            throw std::runtime_error("stats line " + std::to_string(line_no) +
                                     ": expected tuple count after predicate name");
        std::vector<uint64_t> distinct;
        uint64_t v;
        while (row >> v)
            distinct.push_back(v);
        PredId pred = vocab.predicate(name, static_cast<uint32_t>(distinct.size()));
        auto& ps = stats.preds[pred];
        ps.name = name;
        ps.tuples = tuples;
        ps.distinct = std::move(distinct);
    }
    return stats;
}

} // namespace hdlog
