#pragma once

#include <string>
#include <vector>

#include "profset/allocate.hpp"
#include "profset/catalog.hpp"
#include "profset/miner.hpp"
#include "profset/model.hpp"
#include "profset/money.hpp"
#include "profset/rational.hpp"

namespace profset {

/// Per-product profit decomposition. Own profit is what the product earns by
/// itself (its singleton set margin plus the residual margin never claimed
/// by any frequent set). Cross profit attributes the FULL margin of every
/// selected multi-item set to each of its members, so summing the cross
/// column across products double-counts shared sets; report output says so.
struct ProfitBreakdown {
    std::string product_id;
    std::string category_id;
    Money own_profit{0};
    Money cross_profit{0};
    Money total{0}; // own + cross
    bool selected = false;
};

struct CategoryImprovement {
    std::string category_id;
    std::string profset_pick;
    std::string naive_pick;
    Money cross_profset{0};
    Money cross_naive{0};
    bool has_frequent_products = false;
    bool applicable = false;     // false renders as N/A
    Rational improvement{0};     // (cross_profset - cross_naive) / cross_naive
    bool changed = false;        // profset_pick != naive_pick
};

struct Report {
    std::vector<std::string> profset_selection; // product ids, ascending
    std::vector<std::string> naive_selection;   // product ids, ascending
    Money profset_objective{0};
    Money naive_objective{0};
    std::vector<CategoryImprovement> improvements; // one per category, id order
    std::vector<ProfitBreakdown> breakdown;        // every product, id order
    std::size_t categories_changed = 0;
};

/// Own profit of one product: singleton margin plus unclaimed residual.
Money own_profit(const AllocationResult& alloc, ItemId item);

/// Cross profit of one product inside a selection: the summed margins of the
/// multi-item sets that contain it and lie entirely inside the selection.
Money cross_profit(const AllocationResult& alloc, ItemId item,
                   const std::vector<bool>& selected);

/// Per-category product with the highest own profit, ties by smallest id.
/// Requires the one-delegate configuration (every category minimum resolves
/// to 1 and item_max equals the category count); throws DataError otherwise.
std::vector<ItemId> naive_selection(const Catalog& catalog, const AllocationResult& alloc,
                                    const ConstraintConfig& cfg);

/// In categories without any frequent product the objective cannot prefer
/// one product over another (no set contains them), so the reported pick
/// falls back to the naive one. Returns the adjusted selection; categories
/// with frequent products keep the solver's picks.
std::vector<ItemId> finalize_selection(const std::vector<ItemId>& solver_selection,
                                       const Catalog& catalog, const FrequentSetIndex& index,
                                       const std::vector<ItemId>& naive_picks);

std::vector<ProfitBreakdown> product_breakdown(const Catalog& catalog,
                                               const AllocationResult& alloc,
                                               const std::vector<ItemId>& selected);

std::vector<CategoryImprovement> category_improvements(const Catalog& catalog,
                                                       const FrequentSetIndex& index,
                                                       const AllocationResult& alloc,
                                                       const std::vector<ItemId>& profset_sel,
                                                       const std::vector<ItemId>& naive_sel);

/// Assembles the full report for the one-delegate scenario: finalized
/// selection, naive baseline, objectives under `model`, improvement table
/// and product breakdown.
Report build_report(const Catalog& catalog, const FrequentSetIndex& index,
                    const AllocationResult& alloc, const ProfsetModel& model,
                    const Solution& solution, const ConstraintConfig& cfg);

/// Percentage for human output, rounded to the nearest integer percent
/// (ties toward positive infinity), e.g. "588%".
std::string percent_string(const Rational& improvement);

/// Aligned-text tables: category improvements then the product breakdown,
/// with the cross-profit double-counting caveat spelled out.
std::string render_text_report(const Report& report);

} // namespace profset
