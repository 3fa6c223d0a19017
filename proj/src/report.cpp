#include "profset/report.hpp"

#include <algorithm>
#include <sstream>

#include "profset/errors.hpp"

namespace profset {
namespace {

std::uint32_t resolved_min(const ConstraintConfig& cfg, const std::string& category_id) {
    auto it = cfg.item_min.find(category_id);
    return it == cfg.item_min.end() ? 0u : it->second;
}

std::vector<bool> selection_mask(const Catalog& catalog, const std::vector<ItemId>& selected) {
    std::vector<bool> mask(catalog.product_count(), false);
    for (ItemId i : selected) mask[i] = true;
    return mask;
}

std::vector<std::string> to_ids(const Catalog& catalog, std::vector<ItemId> items) {
    std::sort(items.begin(), items.end());
    std::vector<std::string> ids;
    ids.reserve(items.size());
    for (ItemId i : items) ids.push_back(catalog.product_id(i));
    return ids;
}

} // namespace

Money own_profit(const AllocationResult& alloc, ItemId item) {
    Money own{0};
    auto s = alloc.set_margins.find(Itemset({item}));
    if (s != alloc.set_margins.end()) own += s->second;
    auto r = alloc.item_residuals.find(item);
    if (r != alloc.item_residuals.end()) own += r->second;
    return own;
}

Money cross_profit(const AllocationResult& alloc, ItemId item,
                   const std::vector<bool>& selected) {
    Money cross{0};
    for (const auto& [set, margin] : alloc.set_margins) {
        if (set.size() < 2 || !set.contains(item)) continue;
        bool inside = true;
        for (ItemId member : set)
            if (!selected[member]) {
                inside = false;
                break;
            }
        if (inside) cross += margin;
    }
    return cross;
}

std::vector<ItemId> naive_selection(const Catalog& catalog, const AllocationResult& alloc,
                                    const ConstraintConfig& cfg) {
    for (const Category& c : catalog.categories())
        if (resolved_min(cfg, c.id) != 1)
            throw DataError("naive selection requires the one-delegate configuration: "
                            "item_min for category " +
                            c.id + " resolves to " + std::to_string(resolved_min(cfg, c.id)) +
                            ", expected 1");
    if (cfg.item_max != catalog.category_count())
        throw DataError("naive selection requires the one-delegate configuration: item_max = " +
                        std::to_string(cfg.item_max) + ", expected the category count " +
                        std::to_string(catalog.category_count()));

    std::vector<ItemId> picks;
    picks.reserve(catalog.category_count());
    for (const Category& c : catalog.categories()) {
        ItemId best = c.member_items.front();
        Money best_own = own_profit(alloc, best);
        for (ItemId i : c.member_items) {
            Money own = own_profit(alloc, i);
            if (own > best_own) { // strict: ties keep the smaller id
                best = i;
                best_own = own;
            }
        }
        picks.push_back(best);
    }
    std::sort(picks.begin(), picks.end());
    return picks;
}

std::vector<ItemId> finalize_selection(const std::vector<ItemId>& solver_selection,
                                       const Catalog& catalog, const FrequentSetIndex& index,
                                       const std::vector<ItemId>& naive_picks) {
    std::vector<bool> category_frequent(catalog.category_count(), false);
    for (const FrequentEntry& e : index.entries_of_size(1))
        category_frequent[catalog.category_index_of(e.items.items()[0])] = true;

    std::vector<ItemId> result;
    result.reserve(solver_selection.size());
    for (ItemId i : solver_selection)
        if (category_frequent[catalog.category_index_of(i)]) result.push_back(i);
    for (ItemId i : naive_picks)
        if (!category_frequent[catalog.category_index_of(i)]) result.push_back(i);
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<ProfitBreakdown> product_breakdown(const Catalog& catalog,
                                               const AllocationResult& alloc,
                                               const std::vector<ItemId>& selected) {
    std::vector<bool> mask = selection_mask(catalog, selected);
    std::vector<ProfitBreakdown> rows;
    rows.reserve(catalog.product_count());
    for (ItemId i = 0; i < catalog.product_count(); ++i) {
        ProfitBreakdown row;
        row.product_id = catalog.product_id(i);
        row.category_id = catalog.category_of(i).id;
        row.own_profit = own_profit(alloc, i);
        row.cross_profit = cross_profit(alloc, i, mask);
        row.total = row.own_profit + row.cross_profit;
        row.selected = mask[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CategoryImprovement> category_improvements(const Catalog& catalog,
                                                       const FrequentSetIndex& index,
                                                       const AllocationResult& alloc,
                                                       const std::vector<ItemId>& profset_sel,
                                                       const std::vector<ItemId>& naive_sel) {
    std::vector<bool> profset_mask = selection_mask(catalog, profset_sel);
    std::vector<bool> naive_mask = selection_mask(catalog, naive_sel);
    std::vector<bool> category_frequent(catalog.category_count(), false);
    for (const FrequentEntry& e : index.entries_of_size(1))
        category_frequent[catalog.category_index_of(e.items.items()[0])] = true;

    std::vector<ItemId> profset_pick(catalog.category_count(), 0);
    std::vector<ItemId> naive_pick(catalog.category_count(), 0);
    for (ItemId i : profset_sel) profset_pick[catalog.category_index_of(i)] = i;
    for (ItemId i : naive_sel) naive_pick[catalog.category_index_of(i)] = i;

    std::vector<CategoryImprovement> rows;
    rows.reserve(catalog.category_count());
    for (std::size_t c = 0; c < catalog.category_count(); ++c) {
        CategoryImprovement row;
        row.category_id = catalog.categories()[c].id;
        row.profset_pick = catalog.product_id(profset_pick[c]);
        row.naive_pick = catalog.product_id(naive_pick[c]);
        row.cross_profset = cross_profit(alloc, profset_pick[c], profset_mask);
        row.cross_naive = cross_profit(alloc, naive_pick[c], naive_mask);
        row.has_frequent_products = category_frequent[c];
        row.applicable = row.has_frequent_products && row.cross_naive > Money{0};
        if (row.applicable)
            row.improvement = Rational(row.cross_profset.minor_units - row.cross_naive.minor_units,
                                       row.cross_naive.minor_units);
        row.changed = profset_pick[c] != naive_pick[c];
        rows.push_back(std::move(row));
    }
    return rows;
}

Report build_report(const Catalog& catalog, const FrequentSetIndex& index,
                    const AllocationResult& alloc, const ProfsetModel& model,
                    const Solution& solution, const ConstraintConfig& cfg) {
    std::vector<ItemId> naive = naive_selection(catalog, alloc, cfg);
    std::vector<ItemId> solver(solution.selected.begin(), solution.selected.end());
    std::vector<ItemId> profset = finalize_selection(solver, catalog, index, naive);

    Report report;
    report.profset_selection = to_ids(catalog, profset);
    report.naive_selection = to_ids(catalog, naive);
    report.profset_objective =
        objective_value(model, std::vector<std::uint32_t>(profset.begin(), profset.end()));
    report.naive_objective =
        objective_value(model, std::vector<std::uint32_t>(naive.begin(), naive.end()));
    report.improvements = category_improvements(catalog, index, alloc, profset, naive);
    report.breakdown = product_breakdown(catalog, alloc, profset);
    for (const CategoryImprovement& row : report.improvements)
        if (row.changed) ++report.categories_changed;
    return report;
}

std::string percent_string(const Rational& improvement) {
    Rational percent = improvement * 100;
    BigInt rounded = rational_floor(percent + Rational(1, 2));
    return rounded.str() + "%";
}

namespace {

void render_row(std::ostringstream& out, const std::vector<std::string>& cells,
                const std::vector<std::size_t>& widths) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out << cells[i];
        if (i + 1 < cells.size())
            out << std::string(widths[i] - cells[i].size() + 2, ' ');
    }
    out << '\n';
}

void render_table(std::ostringstream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    for (const auto& row : rows) render_row(out, row, widths);
}

} // namespace

std::string render_text_report(const Report& report) {
    std::ostringstream out;
    std::size_t total_categories = report.improvements.size();

    out << "PROFSET report\n";
    out << "==============\n\n";
    out << "profset objective: " << to_string(report.profset_objective) << "\n";
    out << "naive objective:   " << to_string(report.naive_objective) << "\n";
    out << "changed picks:     " << report.categories_changed << "/" << total_categories << "\n\n";

    out << "Cross-selling profit improvements per category\n";
    out << "----------------------------------------------\n";
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"category", "profset pick", "naive pick", "cross profset", "cross naive",
                    "improvement"});
    for (const CategoryImprovement& row : report.improvements) {
        rows.push_back({row.category_id, row.profset_pick, row.naive_pick,
                        to_string(row.cross_profset), to_string(row.cross_naive),
                        row.applicable ? percent_string(row.improvement) : std::string("N/A")});
    }
    render_table(out, rows);
    out << "N/A: the category has no frequent product or the naive pick earns no cross"
           " profit.\n\n";

    out << "Own and cross-selling profit per product\n";
    out << "----------------------------------------\n";
    rows.clear();
    rows.push_back({"product", "category", "own profit", "cross profit", "total", "selected"});
    for (const ProfitBreakdown& row : report.breakdown) {
        rows.push_back({row.product_id, row.category_id, to_string(row.own_profit),
                        to_string(row.cross_profit), to_string(row.total),
                        row.selected ? std::string("*") : std::string("")});
    }
    render_table(out, rows);
    out << "cross profit counts the full margin of every selected multi-item set for each"
           " of its members; summing the column double-counts shared sets.\n";
    return out.str();
}

} // namespace profset
