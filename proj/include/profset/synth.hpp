#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "profset/catalog.hpp"
#include "profset/transaction.hpp"

namespace profset {

/// Configuration for the synthetic retail data generator.
///
/// Planted itemsets model purchase intentions: each basket independently
/// includes the whole set with the configured probability. Remaining items
/// ("fillers") are drawn from the products that belong to no planted set, so
/// planted co-occurrence statistics are not polluted by chance fills.
/// Products of the trailing `rare_category_count` categories receive a near
/// zero filler weight, which yields categories without frequent products.
struct SynthConfig {
    std::uint32_t product_count = 0;
    std::uint32_t category_count = 0;
    std::uint32_t basket_count = 0;
    double mean_basket_size = 10.0;
    std::int64_t margin_min = 1;
    std::int64_t margin_max = 100;
    std::int64_t cost_min = 0;
    std::int64_t cost_max = 100;
    std::uint32_t rare_category_count = 0;

    struct Planted {
        std::vector<std::uint32_t> product_indexes; // 0-based, within product_count
        double probability = 0.0;
    };
    std::vector<Planted> planted;

    static SynthConfig from_json_text(const std::string& text);
    static SynthConfig from_json_file(const std::string& path);

    /// Throws DataError on out-of-range fields (bad probabilities, planted
    /// indexes beyond product_count, inverted ranges, ...).
    void validate() const;
};

/// Deterministic function of (config, seed): equal arguments produce equal
/// catalogs and transaction databases, byte for byte once serialized.
std::pair<Catalog, TransactionDb> generate_synthetic(const SynthConfig& config,
                                                     std::uint64_t seed);

} // namespace profset
