#include "profset/allocate.hpp"

#include <algorithm>

#include "profset/errors.hpp"
#include "profset/parallel.hpp"

namespace profset {
namespace {

bool disjoint(const Itemset& a, const Itemset& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else return false;
    }
    return true;
}

/// Tail run of maximum-cardinality entries of a canonical (size-ascending)
/// entry list.
std::vector<FrequentEntry> max_size_tail(const std::vector<FrequentEntry>& entries) {
    std::vector<FrequentEntry> result;
    if (entries.empty()) return result;
    const std::size_t top = entries.back().items.size();
    auto first = std::find_if(entries.begin(), entries.end(),
                              [&](const FrequentEntry& e) { return e.items.size() == top; });
    result.assign(first, entries.end());
    return result;
}

} // namespace

std::vector<FrequentEntry> maximal_frequent_entries(const std::vector<ItemId>& t,
                                                    const FrequentSetIndex& index) {
    return max_size_tail(frequent_subsets_of(t, index));
}

std::vector<Itemset> maximal_frequent_subsets(const std::vector<ItemId>& t,
                                              const FrequentSetIndex& index) {
    std::vector<Itemset> result;
    for (FrequentEntry& e : maximal_frequent_entries(t, index))
        result.push_back(std::move(e.items));
    return result;
}

const AllocationDistribution::Candidate& AllocationDistribution::draw(SplitMix64& rng) const {
    std::uint64_t r = rng.next_below(total_weight);
    std::uint64_t cumulative = 0;
    for (const Candidate& c : candidates) {
        cumulative += c.weight;
        if (r < cumulative) return c;
    }
    return candidates.back(); // unreachable: r < total_weight
}

AllocationDistribution theta(const std::vector<FrequentEntry>& maximals) {
    if (maximals.empty()) throw DataError("theta: empty candidate list");
    AllocationDistribution dist;
    dist.candidates.reserve(maximals.size());
    for (const FrequentEntry& e : maximals) {
        if (e.support == 0) throw DataError("theta: zero support weight");
        dist.candidates.push_back({e.items, e.support});
        dist.total_weight += e.support;
    }
    return dist;
}

std::string to_string(AllocationMode mode) {
    return mode == AllocationMode::sampled ? "sampled" : "expected";
}

AllocationMode allocation_mode_from_string(const std::string& s) {
    if (s == "sampled") return AllocationMode::sampled;
    if (s == "expected") return AllocationMode::expected;
    throw DataError("unknown allocation mode '" + s + "' (expected 'sampled' or 'expected')");
}

TransactionAllocation allocate_transaction_sampled(const Transaction& t,
                                                   const FrequentSetIndex& index,
                                                   const Catalog& catalog, SplitMix64& rng) {
    TransactionAllocation result;
    std::vector<ItemId> remaining = t.item_set();
    std::vector<FrequentEntry> subsets = frequent_subsets_of(remaining, index);

    while (!remaining.empty()) {
        if (subsets.empty()) {
            for (ItemId id : remaining)
                result.item_residuals[id] +=
                    to_rational(itemset_margin_in(Itemset{id}, t, catalog));
            return result;
        }
        // The remainder itself is frequent: allocate the whole remaining
        // margin to it in one step.
        if (subsets.back().items.size() == remaining.size()) {
            Itemset whole = Itemset::from_sorted(remaining);
            result.set_margins[whole] += to_rational(itemset_margin_in(whole, t, catalog));
            return result;
        }
        AllocationDistribution dist = theta(max_size_tail(subsets));
        const Itemset drawn = dist.draw(rng).items;
        result.set_margins[drawn] += to_rational(itemset_margin_in(drawn, t, catalog));
        remove_items(remaining, drawn);
        std::erase_if(subsets,
                      [&](const FrequentEntry& e) { return !disjoint(e.items, drawn); });
    }
    return result;
}

TransactionAllocation allocate_transaction_expected(const Transaction& t,
                                                    const FrequentSetIndex& index,
                                                    const Catalog& catalog,
                                                    std::uint64_t state_budget) {
    TransactionAllocation result;
    const std::vector<ItemId> full = t.item_set();
    const std::vector<FrequentEntry> all_subsets = frequent_subsets_of(full, index);

    // Probability mass per remaining item set; states shrink strictly, so
    // processing larger sets first visits each state exactly once.
    struct LargerFirst {
        bool operator()(const std::vector<ItemId>& a, const std::vector<ItemId>& b) const {
            if (a.size() != b.size()) return a.size() > b.size();
            return a < b;
        }
    };
    std::map<std::vector<ItemId>, Rational, LargerFirst> pending;
    if (!full.empty()) pending.emplace(full, Rational(1));

    std::uint64_t states_visited = 0;
    while (!pending.empty()) {
        auto node = pending.extract(pending.begin());
        const std::vector<ItemId>& state = node.key();
        const Rational mass = node.mapped();

        if (++states_visited > state_budget)
            throw BudgetError("expected-mode state budget (" + std::to_string(state_budget) +
                              ") exceeded; rerun in sampled mode");

        std::vector<FrequentEntry> subsets;
        for (const FrequentEntry& e : all_subsets)
            if (e.items.subset_of(state)) subsets.push_back(e);

        if (subsets.empty()) {
            for (ItemId id : state)
                result.item_residuals[id] +=
                    mass * to_rational(itemset_margin_in(Itemset{id}, t, catalog));
            continue;
        }
        if (subsets.back().items.size() == state.size()) {
            Itemset whole = Itemset::from_sorted(state);
            result.set_margins[whole] += mass * to_rational(itemset_margin_in(whole, t, catalog));
            continue;
        }
        AllocationDistribution dist = theta(max_size_tail(subsets));
        for (std::size_t i = 0; i < dist.candidates.size(); ++i) {
            const auto& candidate = dist.candidates[i];
            const Rational branch = mass * dist.probability(i);
            result.set_margins[candidate.items] +=
                branch * to_rational(itemset_margin_in(candidate.items, t, catalog));
            std::vector<ItemId> next = state;
            remove_items(next, candidate.items);
            pending[next] += branch;
        }
    }
    return result;
}

Money AllocationResult::allocated_total() const {
    Money sum{0};
    for (const auto& [set, m] : set_margins) sum += m;
    return sum;
}

Money AllocationResult::residual_total() const {
    Money sum{0};
    for (const auto& [item, m] : item_residuals) sum += m;
    return sum;
}

namespace {

/// Integer value of an exact-integer rational (sampled-mode amounts).
Money exact_money(const Rational& q) {
    return Money{static_cast<std::int64_t>(numerator(q) / denominator(q))};
}

struct Partial {
    std::map<Itemset, Money> set_margins;
    std::map<ItemId, Money> item_residuals;
    Money total_input{0};
    std::vector<AllocationResult::Audit> audit;
};

} // namespace

AllocationResult allocate_all(const TransactionDb& db, const FrequentSetIndex& index,
                              const Catalog& catalog, std::uint64_t seed,
                              const AllocateOptions& options) {
    ChunkPlan plan = plan_chunks(db.transactions.size(), options.threads);
    std::vector<Partial> partials(plan.chunks);

    run_chunks(plan, options.threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        Partial& out = partials[chunk];
        for (std::size_t j = begin; j < end; ++j) {
            const Transaction& t = db.transactions[j];
            const Money input = transaction_margin(t, catalog);
            out.total_input += input;

            TransactionAllocation ta;
            if (options.mode == AllocationMode::sampled) {
                SplitMix64 rng(derive_stream_seed(seed, t.id));
                ta = allocate_transaction_sampled(t, index, catalog, rng);
                Money acc{0};
                for (const auto& [set, q] : ta.set_margins) {
                    Money v = exact_money(q);
                    out.set_margins[set] += v;
                    acc += v;
                    if (options.audit) out.audit.push_back({t.id, set, v});
                }
                for (const auto& [item, q] : ta.item_residuals) {
                    Money v = exact_money(q);
                    out.item_residuals[item] += v;
                    acc += v;
                }
                // Sampled amounts are exact integers; nothing can be lost.
                if (acc != input)
                    throw DataError("internal: sampled allocation broke conservation on '" +
                                    t.id + "'");
            } else {
                ta = allocate_transaction_expected(t, index, catalog,
                                                   options.expected_state_budget);
                Money acc{0};
                for (const auto& [set, q] : ta.set_margins) {
                    Money v = round_to_money(q);
                    out.set_margins[set] += v;
                    acc += v;
                    if (options.audit) out.audit.push_back({t.id, set, v});
                }
                for (const auto& [item, q] : ta.item_residuals) {
                    Money v = round_to_money(q);
                    out.item_residuals[item] += v;
                    acc += v;
                }
                // Per-transaction rounding residue lands on the smallest
                // item so conservation stays exact in integers.
                if (acc != input) {
                    if (t.lines.empty())
                        throw DataError("internal: rounding residue on empty transaction '" +
                                        t.id + "'");
                    out.item_residuals[t.lines.front().item] += input - acc;
                }
            }
        }
    });

    AllocationResult result;
    result.seed = seed;
    result.mode = options.mode;
    for (Partial& p : partials) {
        for (const auto& [set, m] : p.set_margins) result.set_margins[set] += m;
        for (const auto& [item, m] : p.item_residuals) result.item_residuals[item] += m;
        result.total_input += p.total_input;
        result.audit.insert(result.audit.end(), std::make_move_iterator(p.audit.begin()),
                            std::make_move_iterator(p.audit.end()));
    }
    return result;
}

} // namespace profset
