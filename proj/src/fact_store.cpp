#include "hdlog/fact_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace hdlog {

FactStore::Relation& FactStore::relation(PredId pred, uint32_t arity) {
    if (relations_.size() <= pred)
        relations_.resize(pred + 1);
    Relation& rel = relations_[pred];
    if (rel.index.empty() && rel.rows.empty()) {
        rel.arity = arity;
        rel.index.resize(arity);
    } else if (rel.arity != arity) {
        throw std::logic_error("fact arity mismatch in store");
    }
    return rel;
}

const FactStore::Relation* FactStore::find_relation(PredId pred) const {
    if (pred >= relations_.size())
        return nullptr;
    const Relation& rel = relations_[pred];
    if (rel.rows.empty())
        return nullptr;
    return &rel;
}

bool FactStore::insert(const Fact& fact, Region region) {
    Relation& rel = relation(fact.pred, static_cast<uint32_t>(fact.args.size()));
    if (rel.by_args.contains(fact.args))
        return false;
    uint32_t slot;
    if (!rel.free_slots.empty()) {
        slot = rel.free_slots.back();
        rel.free_slots.pop_back();
        rel.rows[slot] = fact.args;
        rel.live[slot] = 1;
        rel.tags[slot] = region;
    } else {
        slot = static_cast<uint32_t>(rel.rows.size());
        rel.rows.push_back(fact.args);
        rel.live.push_back(1);
        rel.tags.push_back(region);
    }
    rel.by_args.emplace(fact.args, slot);
    for (uint32_t pos = 0; pos < rel.arity; ++pos)
        rel.index[pos][fact.args[pos]].push_back(slot);
    rel.live_count++;
    size_++;
    if (region == Region::Delta)
        delta_size_++;
    return true;
}

bool FactStore::erase(const Fact& fact) {
    if (fact.pred >= relations_.size())
        return false;
    Relation& rel = relations_[fact.pred];
    auto it = rel.by_args.find(fact.args);
    if (it == rel.by_args.end())
        return false;
    const uint32_t slot = it->second;
    for (uint32_t pos = 0; pos < rel.arity; ++pos) {
        auto bucket = rel.index[pos].find(fact.args[pos]);
        auto& vec = bucket->second;
        vec.erase(std::find(vec.begin(), vec.end(), slot));
        if (vec.empty())
            rel.index[pos].erase(bucket);
    }
    if (rel.tags[slot] == Region::Delta)
        delta_size_--;
    rel.live[slot] = 0;
    rel.rows[slot].clear();
    rel.free_slots.push_back(slot);
    rel.by_args.erase(it);
    rel.live_count--;
    size_--;
    return true;
}

bool FactStore::contains(const Fact& fact) const {
    const Relation* rel = find_relation(fact.pred);
    return rel && rel->by_args.contains(fact.args);
}

std::optional<Region> FactStore::region_of(const Fact& fact) const {
    const Relation* rel = find_relation(fact.pred);
    if (!rel)
        return std::nullopt;
    auto it = rel->by_args.find(fact.args);
    if (it == rel->by_args.end())
        return std::nullopt;
    return rel->tags[it->second];
}

bool FactStore::retag(const Fact& fact, Region region) {
    if (fact.pred >= relations_.size())
        return false;
    Relation& rel = relations_[fact.pred];
    auto it = rel.by_args.find(fact.args);
    if (it == rel.by_args.end())
        return false;
    Region& tag = rel.tags[it->second];
    if (tag != region) {
        if (tag == Region::Delta)
            delta_size_--;
        else
            delta_size_++;
        tag = region;
    }
    return true;
}

void FactStore::promote_delta() {
    if (delta_size_ == 0)
        return;
    for (Relation& rel : relations_)
        for (size_t slot = 0; slot < rel.rows.size(); ++slot)
            if (rel.live[slot])
                rel.tags[slot] = Region::Old;
    delta_size_ = 0;
}

size_t FactStore::size(Scope scope) const {
    switch (scope) {
    case Scope::All: return size_;
    case Scope::DeltaOnly: return delta_size_;
    case Scope::OldOnly: return size_ - delta_size_;
    }
    return 0;
}

void FactStore::for_each(Scope scope, const std::function<void(const Fact&)>& fn) const {
    for (PredId pred = 0; pred < relations_.size(); ++pred) {
        const Relation& rel = relations_[pred];
        for (size_t slot = 0; slot < rel.rows.size(); ++slot) {
            if (!rel.live[slot] || !in_scope(rel.tags[slot], scope))
                continue;
            fn(Fact{pred, rel.rows[slot]});
        }
    }
}

std::vector<Fact> FactStore::facts(Scope scope) const {
    std::vector<Fact> out;
    out.reserve(size(scope));
    for_each(scope, [&](const Fact& f) { out.push_back(f); });
    return out;
}

void FactStore::candidates(PredId pred, std::span<const BoundArg> bound, Scope scope,
                           const std::function<void(std::span<const ConstId>)>& fn) const {
    const Relation* rel = find_relation(pred);
    if (!rel)
        return;
    auto emit_row = [&](uint32_t slot) {
        if (!rel->live[slot] || !in_scope(rel->tags[slot], scope))
            return;
        const std::vector<ConstId>& row = rel->rows[slot];
        for (const BoundArg& b : bound)
            if (row[b.first] != b.second)
                return;
        fn(row);
    };
    if (bound.empty()) {
        for (uint32_t slot = 0; slot < rel->rows.size(); ++slot)
            emit_row(slot);
        return;
    }
    // Drive iteration from the most selective bound position.
    const std::vector<uint32_t>* best = nullptr;
    for (const BoundArg& b : bound) {
        auto it = rel->index[b.first].find(b.second);
        if (it == rel->index[b.first].end())
            return;
        if (!best || it->second.size() < best->size())
            best = &it->second;
    }
    for (uint32_t slot : *best)
        emit_row(slot);
}

void FactStore::candidates_linear(PredId pred, std::span<const BoundArg> bound, Scope scope,
                                  const std::function<void(std::span<const ConstId>)>& fn) const {
    const Relation* rel = find_relation(pred);
    if (!rel)
        return;
    for (uint32_t slot = 0; slot < rel->rows.size(); ++slot) {
        if (!rel->live[slot] || !in_scope(rel->tags[slot], scope))
            continue;
        const std::vector<ConstId>& row = rel->rows[slot];
        bool ok = true;
        for (const BoundArg& b : bound)
            ok = ok && row[b.first] == b.second;
        if (ok)
            fn(row);
    }
}

void FactStore::clear() {
    relations_.clear();
    size_ = 0;
    delta_size_ = 0;
}

} // namespace hdlog
