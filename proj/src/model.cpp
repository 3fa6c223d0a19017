#include "profset/model.hpp"

#include <algorithm>
#include <unordered_map>

#include "profset/errors.hpp"

namespace profset {

ProfsetModel build_model(const AllocationResult& alloc, const Catalog& catalog,
                         const ConstraintConfig& cfg) {
    ProfsetModel model;
    model.items.reserve(catalog.product_count());
    for (const Product& p : catalog.products())
        model.items.push_back({p.id, p.category_id, p.cost});

    for (const Category& c : catalog.categories()) model.category_ids.push_back(c.id);
    model.item_category.resize(model.items.size());
    for (std::size_t i = 0; i < model.items.size(); ++i)
        model.item_category[i] =
            static_cast<std::uint32_t>(catalog.category_index_of(static_cast<ItemId>(i)));

    model.item_max = cfg.item_max;
    model.category_min.assign(model.category_ids.size(), 0);
    std::vector<std::uint32_t> sizes(model.category_ids.size(), 0);
    for (std::uint32_t c : model.item_category) ++sizes[c];
    model.category_cap = sizes;

    for (const auto& [cid, minimum] : cfg.item_min) {
        auto idx = catalog.find_category(cid);
        if (!idx) throw DataError("item_min references unknown category '" + cid + "'");
        model.category_min[*idx] = minimum;
    }
    for (const auto& [cid, cap] : cfg.item_cap) {
        auto idx = catalog.find_category(cid);
        if (!idx) throw DataError("item_cap references unknown category '" + cid + "'");
        if (cap == 0) throw DataError("item_cap for category '" + cid + "' must be positive");
        model.category_cap[*idx] = std::min(cap, sizes[*idx]);
    }

    // Catalog item indices equal model item indices (both are ranks in
    // product-id order), so allocation itemsets carry over unchanged.
    for (const auto& [set, margin] : alloc.set_margins)
        if (margin > Money{0}) model.sets.push_back({set, margin});

    validate_model(model);
    return model;
}

void validate_model(const ProfsetModel& model) {
    const std::size_t ncat = model.category_ids.size();
    if (model.item_category.size() != model.items.size())
        throw DataError("model: item_category size mismatch");
    if (model.category_min.size() != ncat || model.category_cap.size() != ncat)
        throw DataError("model: category constraint arrays misaligned");
    for (std::uint32_t c : model.item_category)
        if (c >= ncat) throw DataError("model: item references unknown category index");
    for (std::size_t i = 1; i < model.items.size(); ++i)
        if (model.items[i - 1].product_id >= model.items[i].product_id)
            throw DataError("model: items not sorted by unique product id");

    std::vector<std::uint32_t> sizes(ncat, 0);
    for (std::uint32_t c : model.item_category) ++sizes[c];

    if (model.item_max == 0) throw InfeasibleError("infeasible: item_max must be positive");

    std::uint64_t min_total = 0;
    std::uint64_t cap_total = 0;
    for (std::size_t c = 0; c < ncat; ++c) {
        if (sizes[c] == 0)
            throw DataError("model: category '" + model.category_ids[c] + "' has no items");
        if (model.category_min[c] > sizes[c])
            throw InfeasibleError("infeasible: item_min[" + model.category_ids[c] + "] = " +
                                  std::to_string(model.category_min[c]) + " exceeds category size " +
                                  std::to_string(sizes[c]));
        if (model.category_cap[c] < model.category_min[c])
            throw InfeasibleError("infeasible: item_cap[" + model.category_ids[c] + "] = " +
                                  std::to_string(model.category_cap[c]) + " below item_min " +
                                  std::to_string(model.category_min[c]));
        min_total += model.category_min[c];
        cap_total += std::min(model.category_cap[c], sizes[c]);
    }
    if (min_total > model.item_max)
        throw InfeasibleError("infeasible: sum of item_min = " + std::to_string(min_total) +
                              " exceeds item_max = " + std::to_string(model.item_max));
    if (model.item_max > cap_total)
        throw InfeasibleError("infeasible: item_max = " + std::to_string(model.item_max) +
                              " exceeds total selectable items = " + std::to_string(cap_total));

    for (const auto& set : model.sets) {
        if (set.items.empty()) throw DataError("model: empty set term");
        for (ItemId id : set.items)
            if (id >= model.items.size())
                throw DataError("model: set term references unknown item index");
    }
}

Money objective_value(const ProfsetModel& model, const std::vector<std::uint32_t>& selected) {
    std::vector<bool> in(model.items.size(), false);
    for (std::uint32_t i : selected) {
        if (i >= model.items.size())
            throw DataError("objective_value: unknown item index " + std::to_string(i));
        in[i] = true;
    }
    Money value{0};
    for (const auto& set : model.sets) {
        if (set.margin <= Money{0}) continue;
        bool covered = true;
        for (ItemId id : set.items)
            if (!in[id]) {
                covered = false;
                break;
            }
        if (covered) value += set.margin;
    }
    // A duplicated index must not double-charge its cost.
    for (std::size_t i = 0; i < in.size(); ++i)
        if (in[i]) value -= model.items[i].cost;
    return value;
}

Money objective_value(const ProfsetModel& model, const std::vector<std::string>& selected_ids) {
    std::vector<std::uint32_t> indices;
    indices.reserve(selected_ids.size());
    for (const std::string& id : selected_ids) {
        auto it = std::lower_bound(model.items.begin(), model.items.end(), id,
                                   [](const ProfsetModel::Item& item, const std::string& key) {
                                       return item.product_id < key;
                                   });
        if (it == model.items.end() || it->product_id != id)
            throw DataError("objective_value: unknown product id '" + id + "'");
        indices.push_back(static_cast<std::uint32_t>(it - model.items.begin()));
    }
    return objective_value(model, indices);
}

} // namespace profset
