#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "hdlog/ast.hpp"

namespace hdlog {

// Number of currently valid one-step derivations per fact, maintained
// incrementally: +1 per rule instance that becomes valid, -1 per instance
// invalidated by deletion. Counts are kept per deriving rule so rederivation
// can ask "still derivable by this rule?"; the global oracle sums them.
// Explicit facts are tracked by flag, not count, so a fact belongs to the
// materialisation iff count > 0 or it is explicit.
struct DerivationCountTable {
    struct Entry {
        int64_t total = 0;
        std::map<uint32_t, int64_t> by_rule;
    };

    std::unordered_map<Fact, Entry, FactHash> counts;
    FactSet explicit_facts;

    void add(const Fact& fact, uint32_t rule, int64_t delta) {
        if (delta == 0)
            return;
        auto [it, fresh] = counts.try_emplace(fact);
        Entry& entry = it->second;
        entry.total += delta;
        int64_t& per_rule = entry.by_rule[rule];
        per_rule += delta;
        if (entry.total < 0 || per_rule < 0)
            throw std::logic_error("derivation count below zero for a fact");
        if (per_rule == 0)
            entry.by_rule.erase(rule);
        if (entry.total == 0)
            counts.erase(it);
    }

    int64_t count(const Fact& fact) const {
        auto it = counts.find(fact);
        return it == counts.end() ? 0 : it->second.total;
    }

    int64_t count(const Fact& fact, uint32_t rule) const {
        auto it = counts.find(fact);
        if (it == counts.end())
            return 0;
        auto rt = it->second.by_rule.find(rule);
        return rt == it->second.by_rule.end() ? 0 : rt->second;
    }

    bool is_explicit(const Fact& fact) const { return explicit_facts.contains(fact); }

    bool operator==(const DerivationCountTable& other) const {
        if (explicit_facts != other.explicit_facts || counts.size() != other.counts.size())
            return false;
        for (const auto& [fact, entry] : counts) {
            auto it = other.counts.find(fact);
            if (it == other.counts.end() || it->second.total != entry.total ||
                it->second.by_rule != entry.by_rule)
                return false;
        }
        return true;
    }

    void clear() {
        counts.clear();
        explicit_facts.clear();
    }
};

// True iff the fact still has a one-step derivation from the remaining facts.
inline bool oracle_check(const DerivationCountTable& table, const Fact& fact) {
    return table.count(fact) > 0;
}

} // namespace hdlog
