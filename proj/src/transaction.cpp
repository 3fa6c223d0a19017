#include "profset/transaction.hpp"

#include <algorithm>

namespace profset {

Money transaction_margin(const Transaction& t, const Catalog& catalog) {
    Money total{0};
    for (const auto& line : t.lines)
        total += catalog.product(line.item).unit_margin * static_cast<std::int64_t>(line.quantity);
    return total;
}

Money itemset_margin_in(const Itemset& s, const Transaction& t, const Catalog& catalog) {
    Money total{0};
    auto it = s.begin();
    for (const auto& line : t.lines) {
        while (it != s.end() && *it < line.item) ++it;
        if (it == s.end()) break;
        if (*it == line.item)
            total += catalog.product(line.item).unit_margin * static_cast<std::int64_t>(line.quantity);
    }
    return total;
}

} // namespace profset
