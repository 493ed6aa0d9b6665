#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hdlog/ast.hpp"

namespace hdlog {

// Partition tag: the delta region holds the facts of the round currently
// being propagated, everything else is old.
enum class Region : uint8_t { Old, Delta };

// Match scope used by evaluation: I \ Delta, Delta, or all of I.
enum class Scope : uint8_t { OldOnly, DeltaOnly, All };

// Indexed fact set with an old/delta partition. Each predicate keeps one
// hash index per argument position; lookups intersect the tightest index
// with inline filtering of the remaining bound positions.
class FactStore {
public:
    bool insert(const Fact& fact, Region region = Region::Old);
    bool erase(const Fact& fact);
    bool contains(const Fact& fact) const;
    std::optional<Region> region_of(const Fact& fact) const;
    bool retag(const Fact& fact, Region region);

    // Moves every delta fact to the old region (end of a round).
    void promote_delta();

    size_t size() const { return size_; }
    size_t size(Scope scope) const;
    bool empty() const { return size_ == 0; }

    void for_each(Scope scope, const std::function<void(const Fact&)>& fn) const;
    std::vector<Fact> facts(Scope scope = Scope::All) const;

    // Invokes fn for every fact of the given predicate, within scope, whose
    // argument at each listed position equals the given constant.
    using BoundArg = std::pair<uint32_t, ConstId>;
    void candidates(PredId pred, std::span<const BoundArg> bound, Scope scope,
                    const std::function<void(std::span<const ConstId>)>& fn) const;

    // Reference implementation of candidates() used by index-consistency
    // tests: a linear scan with the same contract.
    void candidates_linear(PredId pred, std::span<const BoundArg> bound, Scope scope,
                           const std::function<void(std::span<const ConstId>)>& fn) const;

    void clear();

private:
    struct ArgsHash {
        size_t operator()(const std::vector<ConstId>& v) const noexcept {
            uint64_t h = 1469598103934665603ull;
            for (ConstId a : v) {
                h ^= a;
                h *= 1099511628211ull;
            }
            return static_cast<size_t>(h);
        }
    };

    struct Relation {
        uint32_t arity = 0;
        std::vector<std::vector<ConstId>> rows; // slot-stable, holes reused
        std::vector<uint8_t> live;
        std::vector<Region> tags;
        std::vector<uint32_t> free_slots;
        std::unordered_map<std::vector<ConstId>, uint32_t, ArgsHash> by_args;
        std::vector<std::unordered_map<ConstId, std::vector<uint32_t>>> index; // per position
        size_t live_count = 0;
    };

    Relation& relation(PredId pred, uint32_t arity);
    const Relation* find_relation(PredId pred) const;
    static bool in_scope(Region tag, Scope scope) {
        return scope == Scope::All || (scope == Scope::DeltaOnly) == (tag == Region::Delta);
    }

    std::vector<Relation> relations_; // indexed by PredId
    size_t size_ = 0;
    size_t delta_size_ = 0;
};

} // namespace hdlog
