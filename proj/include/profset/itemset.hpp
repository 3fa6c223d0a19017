#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace profset {

/// Dense item index into a Catalog. Catalogs keep products sorted by their
/// external id, so comparing ItemIds is equivalent to comparing product-id
/// strings lexicographically.
using ItemId = std::uint32_t;

/// A set of items in canonical form: sorted ascending, no duplicates.
/// Equal sets compare equal; ordering is canonical (size first, then
/// lexicographic), so containers of itemsets iterate deterministically.
class Itemset {
public:
    Itemset() = default;
    Itemset(std::initializer_list<ItemId> ids) : items_(ids) { normalize(); }
    explicit Itemset(std::vector<ItemId> ids) : items_(std::move(ids)) { normalize(); }

    /// Constructs from a vector already sorted and deduplicated.
    static Itemset from_sorted(std::vector<ItemId> sorted_ids) {
        Itemset s;
        s.items_ = std::move(sorted_ids);
        return s;
    }

    const std::vector<ItemId>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    bool contains(ItemId id) const {
        return std::binary_search(items_.begin(), items_.end(), id);
    }

    /// True when every item of this set occurs in `sorted_super` (ascending).
    bool subset_of(const std::vector<ItemId>& sorted_super) const {
        return std::includes(sorted_super.begin(), sorted_super.end(),
                             items_.begin(), items_.end());
    }

    bool subset_of(const Itemset& super) const { return subset_of(super.items_); }

    bool operator==(const Itemset& rhs) const { return items_ == rhs.items_; }

    /// Canonical order: smaller sets first, then lexicographic by item ids.
    bool operator<(const Itemset& rhs) const {
        if (items_.size() != rhs.items_.size()) return items_.size() < rhs.items_.size();
        return items_ < rhs.items_;
    }

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    void normalize() {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    std::vector<ItemId> items_;
};

/// Removes the items of `s` from the sorted vector `from` in place.
inline void remove_items(std::vector<ItemId>& from, const Itemset& s) {
    auto keep = from.begin();
    auto it = s.begin();
    for (ItemId id : from) {
        while (it != s.end() && *it < id) ++it;
        if (it != s.end() && *it == id) continue;
        *keep++ = id;
    }
    from.erase(keep, from.end());
}

struct ItemsetHash {
    std::size_t operator()(const Itemset& s) const {
        // FNV-1a over the id words; stable across runs.
        std::uint64_t h = 1469598103934665603ull;
        for (ItemId id : s) {
            h ^= id;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace profset
