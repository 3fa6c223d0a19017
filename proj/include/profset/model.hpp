#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "profset/allocate.hpp"
#include "profset/catalog.hpp"
#include "profset/itemset.hpp"
#include "profset/money.hpp"

namespace profset {

/// Selection constraints: exactly item_max products in total, at least
/// item_min[c] and at most item_cap[c] per category. Categories absent from
/// item_min default to 0; absent from item_cap default to the category size.
struct ConstraintConfig {
    std::uint32_t item_max = 0;
    std::map<std::string, std::uint32_t> item_min;
    std::map<std::string, std::uint32_t> item_cap;
};

/// The 0-1 program: pick a product subset maximizing
///   sum of M(X) over frequent sets fully inside the selection
///   minus the handling costs of the selected products,
/// subject to the ConstraintConfig counts. Set variables are eliminated:
/// with positive margins a set contributes exactly when all its items are
/// selected, so only product variables are searched.
struct ProfsetModel {
    struct Item {
        std::string product_id;
        std::string category_id;
        Money cost{0};
    };
    struct SetTerm {
        Itemset items; // indices into `items`, canonical
        Money margin{0};
    };

    std::vector<Item> items;    // sorted by product_id; index = decision variable
    std::vector<SetTerm> sets;  // canonical order, margin > 0 only

    std::uint32_t item_max = 0;
    std::vector<std::string> category_ids;      // sorted
    std::vector<std::uint32_t> category_min;    // aligned with category_ids
    std::vector<std::uint32_t> category_cap;
    std::vector<std::uint32_t> item_category;   // item index -> category index

    std::size_t category_size(std::size_t c) const {
        std::size_t n = 0;
        for (std::uint32_t ic : item_category)
            if (ic == c) ++n;
        return n;
    }
};

/// Builds the model from an allocation: one decision item per catalog
/// product (in catalog id order, so item indices equal catalog ItemIds) and
/// one set term per allocated frequent set with positive margin. Throws
/// InfeasibleError naming the violated inequality when the constraints admit
/// no selection.
ProfsetModel build_model(const AllocationResult& alloc, const Catalog& catalog,
                         const ConstraintConfig& cfg);

/// Validates referential integrity and constraint feasibility; used by
/// build_model and by the JSON loader.
void validate_model(const ProfsetModel& model);

/// Objective of a fixed selection (ascending item indices):
/// sum of margins of covered sets minus selected costs.
Money objective_value(const ProfsetModel& model, const std::vector<std::uint32_t>& selected);

/// Convenience overload on product ids; throws DataError for unknown ids.
Money objective_value(const ProfsetModel& model, const std::vector<std::string>& selected_ids);

struct Solution {
    std::vector<std::uint32_t> selected; // ascending item indices, |selected| == item_max
    std::vector<Itemset> active_sets;    // covered positive sets, canonical
    Money objective{0};
    enum class Proof { optimal, heuristic } proof = Proof::optimal;
    std::uint64_t nodes_explored = 0;
    double wall_seconds = 0.0;
};

struct SolveOptions {
    std::uint64_t node_budget = 10000000; // explicit error on exhaustion
};

/// Exhaustive oracle over all feasible selections; guarded to <= 25 items.
/// Ties are broken by the lexicographically smallest selected index list.
Solution solve_brute(const ProfsetModel& model);

/// Exact branch-and-bound with the same tie-break as solve_brute. Never
/// returns a heuristic answer: on node budget exhaustion it throws
/// BudgetError.
Solution solve_exact(const ProfsetModel& model, const SolveOptions& options = {});

} // namespace profset
