#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace noise_lab {

/// A partition of {0..size-1}, stored as canonical block labels: labels are
/// assigned in order of first appearance, so equal partitions compare equal.
/// Finite σ-fields (on Ω or on the spectral space) are represented this way.
class Partition {
public:
    Partition() = default;

    static Partition from_labels(std::span<const std::size_t> raw) {
        Partition p;
        p.labels_.resize(raw.size());
        std::map<std::size_t, std::size_t> relabel;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            auto [it, inserted] = relabel.try_emplace(raw[i], relabel.size());
            p.labels_[i] = it->second;
        }
        p.block_count_ = relabel.size();
        return p;
    }

    /// Groups indices by an arbitrary ordered key.
    template <class KeyFn>
    static Partition by_key(std::size_t size, KeyFn&& key) {
        using Key = std::decay_t<decltype(key(std::size_t{}))>;
        std::map<Key, std::size_t> ids;
        std::vector<std::size_t> raw(size);
        for (std::size_t i = 0; i < size; ++i) {
            auto [it, inserted] = ids.try_emplace(key(i), ids.size());
            raw[i] = it->second;
        }
        return from_labels(raw);
    }

    static Partition trivial(std::size_t size) {
        return from_labels(std::vector<std::size_t>(size, 0));
    }
    static Partition discrete(std::size_t size) {
        std::vector<std::size_t> raw(size);
        for (std::size_t i = 0; i < size; ++i) raw[i] = i;
        return from_labels(raw);
    }

    std::size_t size() const { return labels_.size(); }
    std::size_t block_count() const { return block_count_; }
    std::size_t label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::size_t>& labels() const { return labels_; }

    std::vector<std::vector<std::size_t>> blocks() const {
        std::vector<std::vector<std::size_t>> out(block_count_);
        for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
        return out;
    }

    bool is_discrete() const { return block_count_ == labels_.size(); }
    bool is_trivial() const { return block_count_ <= 1; }

    /// Common refinement (join of the generated σ-fields).
    Partition refine(const Partition& other) const {
        return by_key(size(), [&](std::size_t i) {
            return std::pair{labels_[i], other.labels_[i]};
        });
    }

    /// Every block of *this lies inside a block of `coarser`.
    bool refines(const Partition& coarser) const {
        return refine(coarser).block_count() == block_count_;
    }

    /// True iff `members` (sorted or not) is exactly one block.
    bool has_block(std::span<const std::size_t> members) const {
        if (members.empty()) return false;
        const std::size_t b = labels_[members[0]];
        std::size_t count = 0;
        for (std::size_t i : members) {
            if (labels_[i] != b) return false;
        }
        for (std::size_t l : labels_) count += (l == b);
        return count == members.size();
    }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<std::size_t> labels_;
    std::size_t block_count_ = 0;
};

} // namespace noise_lab
