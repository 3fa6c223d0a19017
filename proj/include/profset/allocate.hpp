#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "profset/catalog.hpp"
#include "profset/miner.hpp"
#include "profset/money.hpp"
#include "profset/rational.hpp"
#include "profset/rng.hpp"
#include "profset/transaction.hpp"

namespace profset {

/// Frequent subsets of a transaction whose size equals the maximum size
/// among all its frequent subsets (cardinality-maximum, not
/// inclusion-maximal). Canonical order; empty when t has no frequent subset.
std::vector<FrequentEntry> maximal_frequent_entries(const std::vector<ItemId>& t,
                                                    const FrequentSetIndex& index);
std::vector<Itemset> maximal_frequent_subsets(const std::vector<ItemId>& t,
                                              const FrequentSetIndex& index);

/// The draw distribution over a transaction's maximal frequent subsets:
/// P(candidate i) = weight_i / total_weight with integer support weights.
/// Probabilities stay exact; draws never materialize a float.
struct AllocationDistribution {
    struct Candidate {
        Itemset items;
        std::uint64_t weight; // support count, > 0
    };
    std::vector<Candidate> candidates; // canonical order
    std::uint64_t total_weight = 0;

    Rational probability(std::size_t i) const {
        return Rational(candidates[i].weight, total_weight);
    }

    /// Weighted draw by cumulative weight walk over a rejection-sampled
    /// integer in [0, total_weight).
    const Candidate& draw(SplitMix64& rng) const;
};

/// Builds the distribution from maximal entries. Errors on an empty list.
AllocationDistribution theta(const std::vector<FrequentEntry>& maximals);

enum class AllocationMode { sampled, expected };

std::string to_string(AllocationMode mode);
AllocationMode allocation_mode_from_string(const std::string& s);

/// One transaction's allocation, exact in both modes: sampled amounts are
/// integers, expected amounts exact rationals.
struct TransactionAllocation {
    std::map<Itemset, Rational> set_margins;
    std::map<ItemId, Rational> item_residuals;
};

/// Sampled mode: repeatedly allocate the remaining margin following the
/// draw procedure; whatever no frequent set claims ends up as per-item
/// residuals. rng must be the transaction's own stream.
TransactionAllocation allocate_transaction_sampled(const Transaction& t,
                                                   const FrequentSetIndex& index,
                                                   const Catalog& catalog, SplitMix64& rng);

/// Expected mode: the exact expectation of the sampled procedure, computed
/// by propagating probability mass over remaining-item-set states
/// (memoized). Throws BudgetError beyond `state_budget` distinct states.
TransactionAllocation allocate_transaction_expected(const Transaction& t,
                                                    const FrequentSetIndex& index,
                                                    const Catalog& catalog,
                                                    std::uint64_t state_budget = 100000);

struct AllocationResult {
    std::map<Itemset, Money> set_margins;   // accumulated M(X)
    std::map<ItemId, Money> item_residuals; // margin no frequent set claimed
    Money total_input{0};                   // sum of all transaction margins
    std::uint64_t seed = 0;
    AllocationMode mode = AllocationMode::sampled;

    struct Audit {
        std::string txn_id;
        Itemset items;
        Money margin;
    };
    std::vector<Audit> audit; // per-set rows in transaction order, if enabled

    Money allocated_total() const;
    Money residual_total() const;
};

struct AllocateOptions {
    AllocationMode mode = AllocationMode::sampled;
    int threads = 1;                          // 0 = hardware concurrency
    bool audit = false;                       // record (txn, set, margin) rows
    std::uint64_t expected_state_budget = 100000;
};

/// Allocates every transaction and accumulates. Each transaction draws from
/// its own stream derived from (seed, transaction id), so the result is a
/// pure function of (db, index, catalog, seed, mode) no matter the thread
/// count. Conservation is exact: allocated + residual == total input.
///
/// In expected mode the exact rational expectations are rounded to Money per
/// transaction (nearest, ties up) and the integer rounding residue is added
/// to the residual of the transaction's smallest item, keeping conservation
/// exact.
AllocationResult allocate_all(const TransactionDb& db, const FrequentSetIndex& index,
                              const Catalog& catalog, std::uint64_t seed,
                              const AllocateOptions& options = {});

} // namespace profset
