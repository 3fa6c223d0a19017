#include "profset/catalog.hpp"

#include <algorithm>
#include <unordered_map>

#include "profset/errors.hpp"

namespace profset {

Catalog Catalog::build(std::vector<Product> products,
                       std::map<std::string, std::string> category_names) {
    if (products.empty()) throw DataError("empty catalog");

    std::sort(products.begin(), products.end(),
              [](const Product& a, const Product& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < products.size(); ++i) {
        if (products[i].id == products[i - 1].id)
            throw DataError("duplicate product id '" + products[i].id + "'");
    }
    for (const Product& p : products) {
        if (p.cost < Money{0})
            throw DataError("negative cost for product '" + p.id + "'");
        if (p.category_id.empty())
            throw DataError("product '" + p.id + "' has empty category id");
    }

    Catalog cat;
    cat.products_ = std::move(products);

    // category_names may carry ids beyond those referenced; members come from
    // the products themselves, so every built category is non-empty.
    std::map<std::string, std::vector<ItemId>> members;
    for (std::size_t i = 0; i < cat.products_.size(); ++i)
        members[cat.products_[i].category_id].push_back(static_cast<ItemId>(i));

    cat.categories_.reserve(members.size());
    std::unordered_map<std::string, std::size_t> cat_index;
    for (auto& [cid, items] : members) {
        auto name_it = category_names.find(cid);
        Category c;
        c.id = cid;
        c.name = name_it == category_names.end() ? cid : name_it->second;
        c.member_items = std::move(items);
        cat_index.emplace(cid, cat.categories_.size());
        cat.categories_.push_back(std::move(c));
    }

    cat.item_category_.resize(cat.products_.size());
    for (std::size_t i = 0; i < cat.products_.size(); ++i)
        cat.item_category_[i] = cat_index.at(cat.products_[i].category_id);
    return cat;
}

std::optional<ItemId> Catalog::find_item(const std::string& product_id) const {
    auto it = std::lower_bound(products_.begin(), products_.end(), product_id,
                               [](const Product& p, const std::string& id) { return p.id < id; });
    if (it == products_.end() || it->id != product_id) return std::nullopt;
    return static_cast<ItemId>(it - products_.begin());
}

std::optional<std::size_t> Catalog::find_category(const std::string& category_id) const {
    auto it = std::lower_bound(categories_.begin(), categories_.end(), category_id,
                               [](const Category& c, const std::string& id) { return c.id < id; });
    if (it == categories_.end() || it->id != category_id) return std::nullopt;
    return static_cast<std::size_t>(it - categories_.begin());
}

} // namespace profset
