#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "profset/catalog.hpp"
#include "profset/itemset.hpp"
#include "profset/money.hpp"

namespace profset {

/// One market basket. Lines are kept sorted by item for canonical iteration;
/// quantities are always >= 1. Mining treats a basket as the set of its item
/// ids; margins are quantity weighted.
struct Transaction {
    struct Line {
        ItemId item;
        std::uint32_t quantity;
        bool operator==(const Line&) const = default;
    };

    std::string id;
    std::vector<Line> lines; // sorted by item, items distinct

    bool operator==(const Transaction&) const = default;

    /// The basket as a plain ascending id vector (quantities dropped).
    std::vector<ItemId> item_set() const {
        std::vector<ItemId> ids;
        ids.reserve(lines.size());
        for (const Line& l : lines) ids.push_back(l.item);
        return ids;
    }
};

struct TransactionDb {
    std::vector<Transaction> transactions; // ids unique

    bool operator==(const TransactionDb&) const = default;
    std::size_t size() const { return transactions.size(); }
};

/// m(T): exact integer sum of unit_margin * quantity over the lines.
Money transaction_margin(const Transaction& t, const Catalog& catalog);

/// Margin of the items of `s` at the quantities they have in `t`. Items of
/// `s` missing from `t` contribute nothing.
Money itemset_margin_in(const Itemset& s, const Transaction& t, const Catalog& catalog);

} // namespace profset
