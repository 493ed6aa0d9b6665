#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hdlog {

using ConstId = uint32_t;
using PredId = uint32_t;
using VarId = uint32_t;

inline constexpr uint32_t kNoBinding = 0xffffffffu;

// Interning table for constants and predicates. All engine structures hold
// dense integer ids; the vocabulary is the only place that keeps the text.
class Vocabulary {
public:
    ConstId constant(std::string_view text) {
        auto it = const_ids_.find(text);
        if (it != const_ids_.end())
            return it->second;
        ConstId id = static_cast<ConstId>(const_texts_.size());
        const_texts_.emplace_back(text);
        const_ids_.emplace(const_texts_.back(), id);
        return id;
    }

    std::optional<ConstId> find_constant(std::string_view text) const {
        auto it = const_ids_.find(text);
        if (it == const_ids_.end())
            return std::nullopt;
        return it->second;
    }

    const std::string& constant_text(ConstId id) const { return const_texts_.at(id); }

    // Registers a predicate or returns the existing id; a second registration
    // with a different arity is an input error.
    PredId predicate(std::string_view name, uint32_t arity) {
        auto it = pred_ids_.find(name);
        if (it != pred_ids_.end()) {
            const PredId id = it->second;
            if (pred_arities_[id] != arity)
                throw std::runtime_error("arity conflict for predicate '" + std::string(name) +
                                         "': seen with arity " + std::to_string(pred_arities_[id]) +
                                         " and " + std::to_string(arity));
            return id;
        }
        PredId id = static_cast<PredId>(pred_names_.size());
        pred_names_.emplace_back(name);
        pred_arities_.push_back(arity);
        pred_ids_.emplace(pred_names_.back(), id);
        return id;
    }

    std::optional<PredId> find_predicate(std::string_view name) const {
        auto it = pred_ids_.find(name);
        if (it == pred_ids_.end())
            return std::nullopt;
        return it->second;
    }

    const std::string& predicate_name(PredId id) const { return pred_names_.at(id); }
    uint32_t arity(PredId id) const { return pred_arities_.at(id); }

    size_t num_constants() const { return const_texts_.size(); }
    size_t num_predicates() const { return pred_names_.size(); }

private:
    // Heterogeneous lookup so find() takes string_view without allocating.
    struct SvHash {
        using is_transparent = void;
        size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };
    struct SvEq {
        using is_transparent = void;
        bool operator()(std::string_view a, std::string_view b) const noexcept { return a == b; }
    };

    std::vector<std::string> const_texts_;
    std::unordered_map<std::string, ConstId, SvHash, SvEq> const_ids_;
    std::vector<std::string> pred_names_;
    std::vector<uint32_t> pred_arities_;
    std::unordered_map<std::string, PredId, SvHash, SvEq> pred_ids_;
};

} // namespace hdlog
