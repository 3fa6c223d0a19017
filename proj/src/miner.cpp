#include "profset/miner.hpp"

#include <algorithm>
#include <unordered_set>

#include "profset/errors.hpp"
#include "profset/parallel.hpp"

namespace profset {
namespace {

/// C(n, k) saturated at a large sentinel; used only to pick a counting
/// strategy.
std::uint64_t combinations_capped(std::uint64_t n, std::uint64_t k) {
    constexpr std::uint64_t kCap = 1ull << 40;
    if (k > n) return 0;
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        if (result > kCap / (n - i)) return kCap;
        result = result * (n - i) / (i + 1);
    }
    return result;
}

/// Calls fn(combo) for every k-combination of `items`, in lexicographic order.
template <typename Fn>
void for_each_combination(const std::vector<ItemId>& items, std::size_t k, Fn&& fn) {
    const std::size_t n = items.size();
    if (k == 0 || k > n) return;
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[i] = i;
    std::vector<ItemId> combo(k);
    for (;;) {
        for (std::size_t i = 0; i < k; ++i) combo[i] = items[pos[i]];
        fn(combo);
        // rightmost position that can still advance
        std::size_t i = k;
        while (i > 0 && pos[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return;
        ++pos[i - 1];
        for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

/// Counts the support of every candidate over the baskets. Per basket the
/// cheaper of two strategies is used: enumerate the basket's k-subsets and
/// look them up, or test every candidate for containment.
std::vector<std::uint32_t> count_supports(const std::vector<std::vector<ItemId>>& baskets,
                                          const std::vector<Itemset>& candidates,
                                          std::size_t k, int threads) {
    std::unordered_map<Itemset, std::uint32_t, ItemsetHash> candidate_index;
    candidate_index.reserve(candidates.size() * 2);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        candidate_index.emplace(candidates[i], static_cast<std::uint32_t>(i));

    ChunkPlan plan = plan_chunks(baskets.size(), threads);
    std::vector<std::vector<std::uint32_t>> partial(plan.chunks);

    run_chunks(plan, threads,
        [&](std::size_t begin, std::size_t end, std::size_t chunk) {
            std::vector<std::uint32_t>& counts = partial[chunk];
            counts.assign(candidates.size(), 0);
            for (std::size_t b = begin; b < end; ++b) {
                const auto& basket = baskets[b];
                if (basket.size() < k) continue;
                const std::uint64_t combos = combinations_capped(basket.size(), k);
                if (combos <= 4 * candidates.size() + 64) {
                    for_each_combination(basket, k, [&](const std::vector<ItemId>& combo) {
                        auto it = candidate_index.find(Itemset::from_sorted(combo));
                        if (it != candidate_index.end()) ++counts[it->second];
                    });
                } else {
                    for (std::size_t c = 0; c < candidates.size(); ++c)
                        if (candidates[c].subset_of(basket)) ++counts[c];
                }
            }
        });

    std::vector<std::uint32_t> total(candidates.size(), 0);
    for (const auto& counts : partial)
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += counts[i];
    return total;
}

/// Joins lexicographically sorted frequent k-sets sharing a (k-1)-prefix and
/// prunes candidates with an infrequent k-subset.
std::vector<Itemset> generate_candidates(const std::vector<Itemset>& frequent_k,
                                         const std::unordered_set<Itemset, ItemsetHash>& frequent_lookup) {
    std::vector<Itemset> candidates;
    const std::size_t k = frequent_k.empty() ? 0 : frequent_k.front().size();
    std::size_t run_begin = 0;
    while (run_begin < frequent_k.size()) {
        std::size_t run_end = run_begin + 1;
        auto shares_prefix = [&](const Itemset& a, const Itemset& b) {
            return std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1);
        };
        while (run_end < frequent_k.size() &&
               shares_prefix(frequent_k[run_begin], frequent_k[run_end]))
            ++run_end;
        for (std::size_t a = run_begin; a < run_end; ++a) {
            for (std::size_t b = a + 1; b < run_end; ++b) {
                std::vector<ItemId> joined(frequent_k[a].begin(), frequent_k[a].end());
                joined.push_back(*(frequent_k[b].end() - 1));
                Itemset candidate = Itemset::from_sorted(std::move(joined));

                // Downward-closure prune: all k-subsets must be frequent.
                bool keep = true;
                std::vector<ItemId> sub(candidate.begin(), candidate.end());
                for (std::size_t drop = 0; keep && drop < k + 1; ++drop) {
                    std::vector<ItemId> s;
                    s.reserve(k);
                    for (std::size_t i = 0; i < k + 1; ++i)
                        if (i != drop) s.push_back(sub[i]);
                    keep = frequent_lookup.contains(Itemset::from_sorted(std::move(s)));
                }
                if (keep) candidates.push_back(std::move(candidate));
            }
        }
        run_begin = run_end;
    }
    return candidates;
}

} // namespace

FrequentSetIndex FrequentSetIndex::from_entries(std::vector<FrequentEntry> entries,
                                                std::uint32_t minsup, std::uint32_t txn_count) {
    std::sort(entries.begin(), entries.end(),
              [](const FrequentEntry& a, const FrequentEntry& b) { return a.items < b.items; });

    FrequentSetIndex index;
    index.minsup_ = minsup;
    index.txn_count_ = txn_count;
    index.support_.reserve(entries.size() * 2);

    std::size_t max_size = 0;
    for (const FrequentEntry& e : entries) max_size = std::max(max_size, e.items.size());
    index.by_size_.resize(max_size + 1);

    for (const FrequentEntry& e : entries) {
        if (e.items.empty()) throw DataError("frequent set index: empty itemset entry");
        if (e.support < minsup)
            throw DataError("frequent set index: entry below minsup");
        if (e.support > txn_count)
            throw DataError("frequent set index: support exceeds transaction count");
        if (!index.support_.emplace(e.items, e.support).second)
            throw DataError("frequent set index: duplicate entry");
        index.by_size_[e.items.size()].push_back(e);
    }

    // Downward closure and anti-monotonicity along one-item-removal edges
    // (which implies them for all subset pairs).
    for (const FrequentEntry& e : entries) {
        if (e.items.size() < 2) continue;
        const auto& ids = e.items.items();
        for (std::size_t drop = 0; drop < ids.size(); ++drop) {
            std::vector<ItemId> sub;
            sub.reserve(ids.size() - 1);
            for (std::size_t i = 0; i < ids.size(); ++i)
                if (i != drop) sub.push_back(ids[i]);
            auto it = index.support_.find(Itemset::from_sorted(std::move(sub)));
            if (it == index.support_.end())
                throw DataError("frequent set index: downward closure violated");
            if (it->second < e.support)
                throw DataError("frequent set index: anti-monotonicity violated");
        }
    }

    index.entries_ = std::move(entries);
    return index;
}

std::optional<std::uint32_t> FrequentSetIndex::support_of(const Itemset& s) const {
    auto it = support_.find(s);
    if (it == support_.end()) return std::nullopt;
    return it->second;
}

const std::vector<FrequentEntry>& FrequentSetIndex::entries_of_size(std::size_t k) const {
    static const std::vector<FrequentEntry> empty;
    if (k >= by_size_.size()) return empty;
    return by_size_[k];
}

FrequentSetIndex mine_frequent(const TransactionDb& db, std::uint32_t minsup,
                               const MineOptions& options) {
    if (minsup < 1) throw DataError("minsup must be >= 1");
    if (db.transactions.empty()) throw DataError("empty transaction database");

    std::vector<std::vector<ItemId>> baskets;
    baskets.reserve(db.transactions.size());
    ItemId max_item = 0;
    for (const Transaction& t : db.transactions) {
        baskets.push_back(t.item_set());
        for (ItemId id : baskets.back()) max_item = std::max(max_item, id);
    }

    std::vector<FrequentEntry> all_entries;

    // Level 1: plain item counts.
    ChunkPlan plan = plan_chunks(baskets.size(), options.threads);
    std::vector<std::vector<std::uint32_t>> partial(plan.chunks);
    run_chunks(plan, options.threads,
        [&](std::size_t begin, std::size_t end, std::size_t chunk) {
            std::vector<std::uint32_t>& counts = partial[chunk];
            counts.assign(static_cast<std::size_t>(max_item) + 1, 0);
            for (std::size_t b = begin; b < end; ++b)
                for (ItemId id : baskets[b]) ++counts[id];
        });
    std::vector<std::uint32_t> item_counts(static_cast<std::size_t>(max_item) + 1, 0);
    for (const auto& counts : partial)
        for (std::size_t i = 0; i < item_counts.size(); ++i) item_counts[i] += counts[i];

    std::vector<Itemset> frequent_k;
    for (ItemId id = 0; id <= max_item; ++id) {
        if (item_counts[id] >= minsup) {
            frequent_k.push_back(Itemset{id});
            all_entries.push_back({Itemset{id}, item_counts[id]});
        }
    }

    std::size_t k = 1;
    while (!frequent_k.empty() &&
           (options.max_itemset_size == 0 || k < options.max_itemset_size)) {
        std::unordered_set<Itemset, ItemsetHash> lookup(frequent_k.begin(), frequent_k.end());
        std::vector<Itemset> candidates = generate_candidates(frequent_k, lookup);
        if (candidates.empty()) break;

        std::vector<std::uint32_t> supports =
            count_supports(baskets, candidates, k + 1, options.threads);

        std::vector<Itemset> next;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (supports[i] >= minsup) {
                next.push_back(candidates[i]);
                all_entries.push_back({candidates[i], supports[i]});
            }
        }
        frequent_k = std::move(next);
        ++k;
    }

    return FrequentSetIndex::from_entries(std::move(all_entries), minsup,
                                          static_cast<std::uint32_t>(db.transactions.size()));
}

std::vector<FrequentEntry> frequent_subsets_of(const std::vector<ItemId>& t,
                                               const FrequentSetIndex& index) {
    std::vector<FrequentEntry> result;
    for (std::size_t k = 1; k <= std::min(index.max_entry_size(), t.size()); ++k)
        for (const FrequentEntry& e : index.entries_of_size(k))
            if (e.items.subset_of(t)) result.push_back(e);
    return result;
}

} // namespace profset
