#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "profset/itemset.hpp"
#include "profset/money.hpp"

namespace profset {

struct Product {
    std::string id;
    std::string name;
    std::string category_id;
    Money unit_margin;     // margin earned per unit sold
    Money cost;            // fixed inventory/handling cost of selecting the item
};

struct Category {
    std::string id;
    std::string name;
    std::vector<ItemId> member_items; // dense indices, ascending
};

/// Immutable product/category master data. Products are stored sorted by
/// product id, so the dense ItemId of a product is its rank in id order and
/// ItemId comparisons agree with lexicographic id comparisons. Categories
/// partition the products: every product belongs to exactly one category.
class Catalog {
public:
    /// Validates and builds a catalog. Throws DataError on duplicate product
    /// ids, dangling category references, empty input, or negative costs.
    static Catalog build(std::vector<Product> products,
                         std::map<std::string, std::string> category_names);

    const std::vector<Product>& products() const { return products_; }
    const std::vector<Category>& categories() const { return categories_; }

    std::size_t product_count() const { return products_.size(); }
    std::size_t category_count() const { return categories_.size(); }

    const Product& product(ItemId id) const { return products_[id]; }
    const std::string& product_id(ItemId id) const { return products_[id].id; }

    /// Dense index of a product id, if present.
    std::optional<ItemId> find_item(const std::string& product_id) const;

    /// Index into categories() for a product.
    std::size_t category_index_of(ItemId item) const { return item_category_[item]; }
    const Category& category_of(ItemId item) const { return categories_[item_category_[item]]; }

    std::optional<std::size_t> find_category(const std::string& category_id) const;

private:
    std::vector<Product> products_;           // sorted by id
    std::vector<Category> categories_;        // sorted by id
    std::vector<std::size_t> item_category_;  // ItemId -> category index
};

} // namespace profset
