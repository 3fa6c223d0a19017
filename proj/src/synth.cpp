#include "profset/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "profset/errors.hpp"
#include "profset/rng.hpp"

namespace profset {
namespace {

using nlohmann::json;

std::string padded(const char* prefix, std::uint64_t value, std::uint64_t max_value) {
    std::size_t width = std::to_string(max_value).size();
    std::string digits = std::to_string(value);
    return prefix + std::string(width - digits.size(), '0') + digits;
}

/// Binomial(n, 1/2) by counting random bits; integer-exact, so basket sizes
/// do not depend on the platform's libm.
std::uint32_t binomial_half(SplitMix64& rng, std::uint32_t n) {
    std::uint32_t count = 0;
    while (n > 0) {
        std::uint32_t take = std::min<std::uint32_t>(n, 64);
        std::uint64_t word = rng.next_u64();
        if (take < 64) word &= (1ull << take) - 1;
        count += static_cast<std::uint32_t>(std::popcount(word));
        n -= take;
    }
    return count;
}

constexpr std::uint64_t kRegularWeight = 10000;
constexpr std::uint64_t kRareWeight = 1;

} // namespace

void SynthConfig::validate() const {
    if (product_count == 0) throw DataError("product_count must be positive");
    if (category_count == 0 || category_count > product_count)
        throw DataError("category_count must be in [1, product_count]");
    if (basket_count == 0) throw DataError("basket_count must be positive");
    if (!(mean_basket_size >= 0.0) || mean_basket_size > 1e6)
        throw DataError("mean_basket_size out of range");
    if (margin_min > margin_max) throw DataError("margin_min exceeds margin_max");
    if (cost_min > cost_max) throw DataError("cost_min exceeds cost_max");
    if (cost_min < 0) throw DataError("cost_min must be non-negative");
    if (rare_category_count >= category_count)
        throw DataError("rare_category_count must be below category_count");
    for (std::size_t i = 0; i < planted.size(); ++i) {
        const Planted& p = planted[i];
        if (p.product_indexes.empty())
            throw DataError("planted itemset " + std::to_string(i) + " is empty");
        for (std::uint32_t idx : p.product_indexes)
            if (idx >= product_count)
                throw DataError("planted itemset " + std::to_string(i) +
                                " references nonexistent product index " + std::to_string(idx));
        if (!(p.probability >= 0.0) || p.probability > 1.0)
            throw DataError("planted itemset " + std::to_string(i) + " probability outside [0,1]");
    }
}

SynthConfig SynthConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid synth config JSON: ") + e.what());
    }
    SynthConfig cfg;
    try {
        cfg.product_count = j.at("product_count").get<std::uint32_t>();
        cfg.category_count = j.at("category_count").get<std::uint32_t>();
        cfg.basket_count = j.at("basket_count").get<std::uint32_t>();
        cfg.mean_basket_size = j.at("mean_basket_size").get<double>();
        cfg.margin_min = j.value("margin_min", cfg.margin_min);
        cfg.margin_max = j.value("margin_max", cfg.margin_max);
        cfg.cost_min = j.value("cost_min", cfg.cost_min);
        cfg.cost_max = j.value("cost_max", cfg.cost_max);
        cfg.rare_category_count = j.value("rare_category_count", cfg.rare_category_count);
        for (const auto& p : j.value("planted", json::array())) {
            SynthConfig::Planted planted;
            planted.product_indexes = p.at("items").get<std::vector<std::uint32_t>>();
            planted.probability = p.at("probability").get<double>();
            cfg.planted.push_back(std::move(planted));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid synth config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

SynthConfig SynthConfig::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::pair<Catalog, TransactionDb> generate_synthetic(const SynthConfig& config,
                                                     std::uint64_t seed) {
    config.validate();

    const std::uint32_t n = config.product_count;
    const std::uint32_t ncat = config.category_count;

    // Products: contiguous category blocks; ids are zero padded so that
    // lexicographic id order equals numeric order.
    std::vector<Product> products(n);
    std::map<std::string, std::string> category_names;
    SplitMix64 product_rng(derive_stream_seed(seed, "synth/products"));
    std::vector<bool> is_rare_category(ncat, false);
    for (std::uint32_t c = ncat - config.rare_category_count; c < ncat; ++c)
        is_rare_category[c] = true;

    std::vector<std::uint32_t> category_of(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t c = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(i) * ncat) / n);
        category_of[i] = c;
        Product& p = products[i];
        p.id = padded("P", i, n - 1);
        p.name = "Product " + std::to_string(i);
        p.category_id = padded("C", c, ncat - 1);
        p.unit_margin = Money{product_rng.next_in(config.margin_min, config.margin_max)};
        p.cost = Money{product_rng.next_in(config.cost_min, config.cost_max)};
        category_names.emplace(p.category_id, "Category " + std::to_string(c));
    }

    // Filler pool: everything outside planted sets, rare products nearly
    // weightless. Cumulative weights support binary-search draws.
    std::vector<bool> in_planted(n, false);
    for (const auto& planted : config.planted)
        for (std::uint32_t idx : planted.product_indexes) in_planted[idx] = true;

    std::vector<std::uint32_t> pool;
    std::vector<std::uint64_t> pool_cumulative;
    std::uint64_t total_weight = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (in_planted[i]) continue;
        total_weight += is_rare_category[category_of[i]] ? kRareWeight : kRegularWeight;
        pool.push_back(i);
        pool_cumulative.push_back(total_weight);
    }

    std::vector<std::uint64_t> planted_thresholds;
    planted_thresholds.reserve(config.planted.size());
    for (const auto& planted : config.planted)
        planted_thresholds.push_back(probability_threshold(planted.probability));

    const std::uint32_t size_trials =
        static_cast<std::uint32_t>(std::llround(2.0 * config.mean_basket_size));

    TransactionDb db;
    db.transactions.reserve(config.basket_count);
    for (std::uint32_t b = 0; b < config.basket_count; ++b) {
        Transaction t;
        t.id = padded("T", b, config.basket_count - 1);
        SplitMix64 rng(derive_stream_seed(seed, "synth/basket/" + t.id));

        std::set<std::uint32_t> items;
        for (std::size_t pi = 0; pi < config.planted.size(); ++pi)
            if (rng.next_bernoulli(planted_thresholds[pi]))
                items.insert(config.planted[pi].product_indexes.begin(),
                             config.planted[pi].product_indexes.end());

        std::uint32_t target = std::max<std::uint32_t>(1, binomial_half(rng, size_trials));
        if (!pool.empty()) {
            std::uint64_t attempts = 0;
            const std::uint64_t max_attempts = 64ull * target + 256;
            while (items.size() < target && attempts < max_attempts) {
                ++attempts;
                std::uint64_t r = rng.next_below(total_weight);
                auto it = std::upper_bound(pool_cumulative.begin(), pool_cumulative.end(), r);
                items.insert(pool[static_cast<std::size_t>(it - pool_cumulative.begin())]);
            }
        }
        if (items.empty()) items.insert(pool.empty() ? 0u : pool[0]);

        for (std::uint32_t idx : items) {
            // Quantities: mostly 1, occasionally 2..4.
            std::uint32_t qty = 1;
            if (rng.next_below(8) == 0) qty += static_cast<std::uint32_t>(rng.next_below(3)) + 1;
            t.lines.push_back({static_cast<ItemId>(idx), qty});
        }
        db.transactions.push_back(std::move(t));
    }

    Catalog catalog = Catalog::build(std::move(products), std::move(category_names));
    // Product index == dense ItemId here because generated ids sort numerically.
    return {std::move(catalog), std::move(db)};
}

} // namespace profset
