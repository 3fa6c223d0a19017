#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "profset/itemset.hpp"
#include "profset/transaction.hpp"

namespace profset {

struct FrequentEntry {
    Itemset items;
    std::uint32_t support = 0; // absolute number of containing transactions

    bool operator==(const FrequentEntry&) const = default;
};

/// All frequent itemsets at an absolute support threshold, queryable by
/// subset containment. Entries are kept in canonical order (size ascending,
/// then lexicographic) and grouped by size for basket scans. Immutable after
/// construction and safe to share across threads.
class FrequentSetIndex {
public:
    FrequentSetIndex() = default;

    /// Builds from precomputed entries, validating the structural
    /// invariants: support >= minsup, downward closure (every one-smaller
    /// subset present) and anti-monotonicity along those edges.
    static FrequentSetIndex from_entries(std::vector<FrequentEntry> entries,
                                         std::uint32_t minsup, std::uint32_t txn_count);

    const std::vector<FrequentEntry>& entries() const { return entries_; }
    std::uint32_t minsup() const { return minsup_; }
    std::uint32_t txn_count() const { return txn_count_; }
    bool empty() const { return entries_.empty(); }
    std::size_t max_entry_size() const { return by_size_.empty() ? 0 : by_size_.size() - 1; }

    std::optional<std::uint32_t> support_of(const Itemset& s) const;

    /// Entries of one size, canonical order.
    const std::vector<FrequentEntry>& entries_of_size(std::size_t k) const;

private:
    std::vector<FrequentEntry> entries_;                 // canonical order
    std::vector<std::vector<FrequentEntry>> by_size_;    // by_size_[k], k >= 1
    std::unordered_map<Itemset, std::uint32_t, ItemsetHash> support_;
    std::uint32_t minsup_ = 0;
    std::uint32_t txn_count_ = 0;
};

struct MineOptions {
    std::size_t max_itemset_size = 0; // 0 = unbounded; a performance knob only
    int threads = 1;                  // 0 = hardware concurrency
};

/// Level-wise Apriori over set-valued baskets. Quantities are ignored here;
/// a basket counts once per contained itemset. Counts are exact and
/// independent of the thread count.
FrequentSetIndex mine_frequent(const TransactionDb& db, std::uint32_t minsup,
                               const MineOptions& options = {});

/// Exactly the index entries that are subsets of `t` (ascending id vector),
/// in canonical order.
std::vector<FrequentEntry> frequent_subsets_of(const std::vector<ItemId>& t,
                                               const FrequentSetIndex& index);

} // namespace profset
