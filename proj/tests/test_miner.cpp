#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "profset/errors.hpp"
#include "profset/miner.hpp"

using namespace profset;
using profset::testing::brute_frequent;
using profset::testing::random_db;

namespace {

Transaction txn(std::string id, std::vector<ItemId> items) {
    Transaction t;
    t.id = std::move(id);
    std::sort(items.begin(), items.end());
    for (ItemId i : items) t.lines.push_back({i, 1});
    return t;
}

/// Five baskets over items 0,1,2 with supports
///   {0}:4 {1}:4 {2}:2 {0,1}:3 {0,2}:2 {1,2}:1 {0,1,2}:1
TransactionDb five_basket_db() {
    TransactionDb db;
    db.transactions.push_back(txn("t1", {0, 1}));
    db.transactions.push_back(txn("t2", {0, 1}));
    db.transactions.push_back(txn("t3", {0, 1, 2}));
    db.transactions.push_back(txn("t4", {0, 2}));
    db.transactions.push_back(txn("t5", {1}));
    return db;
}

} // namespace

TEST_CASE("mine_frequent on the five-basket example") {
    FrequentSetIndex index = mine_frequent(five_basket_db(), 2);
    std::vector<FrequentEntry> expected = {
        {Itemset{0}, 4}, {Itemset{1}, 4}, {Itemset{2}, 2},
        {Itemset{0, 1}, 3}, {Itemset{0, 2}, 2},
    };
    CHECK(index.entries() == expected);
    CHECK(index.minsup() == 2);
    CHECK(index.txn_count() == 5);
    CHECK(index.max_entry_size() == 2);
    CHECK(index.support_of(Itemset{0, 1}) == std::uint32_t{3});
    CHECK_FALSE(index.support_of(Itemset{1, 2}).has_value());
    CHECK_FALSE(index.support_of(Itemset{0, 1, 2}).has_value());

    CHECK(index.entries_of_size(1).size() == 3);
    CHECK(index.entries_of_size(2).size() == 2);
    CHECK(index.entries_of_size(3).empty());
    CHECK(index.entries_of_size(0).empty());
}

TEST_CASE("mining thresholds behave at the edges") {
    TransactionDb db = five_basket_db();
    CHECK_THROWS_WITH_AS(mine_frequent(db, 0), "minsup must be >= 1", DataError);
    CHECK_THROWS_WITH_AS(mine_frequent(TransactionDb{}, 1), "empty transaction database",
                         DataError);

    // above every support: nothing is frequent
    FrequentSetIndex none = mine_frequent(db, 6);
    CHECK(none.empty());
    CHECK(none.max_entry_size() == 0);

    // at the db size only items in every basket survive; here there are none
    CHECK(mine_frequent(db, 5).empty());

    // minsup 1 keeps every occurring subset
    FrequentSetIndex all = mine_frequent(db, 1);
    CHECK(all.entries().size() == brute_frequent(db, 1).size());
}

TEST_CASE("mine_frequent equals brute-force enumeration") {
    SplitMix64 rng(2024);
    for (int round = 0; round < 60; ++round) {
        std::uint32_t items = 2 + static_cast<std::uint32_t>(rng.next_below(7));
        TransactionDb db = random_db(rng, items, 40);
        std::uint32_t minsup = 1 + static_cast<std::uint32_t>(rng.next_below(5));
        std::size_t max_size = rng.next_below(2) == 0 ? 0 : 1 + rng.next_below(3);

        MineOptions options;
        options.max_itemset_size = max_size;
        FrequentSetIndex mined = mine_frequent(db, minsup, options);
        std::vector<FrequentEntry> expected = brute_frequent(db, minsup, max_size);
        CHECK(mined.entries() == expected);
    }
}

TEST_CASE("thread count never changes the mined sets") {
    SplitMix64 rng(7);
    TransactionDb db = random_db(rng, 24, 400);
    MineOptions one;
    one.threads = 1;
    MineOptions many;
    many.threads = 8;
    CHECK(mine_frequent(db, 3, one).entries() == mine_frequent(db, 3, many).entries());
}

TEST_CASE("anti-monotonicity holds across the index") {
    SplitMix64 rng(99);
    TransactionDb db = random_db(rng, 10, 120);
    FrequentSetIndex index = mine_frequent(db, 2);
    for (const FrequentEntry& e : index.entries()) {
        if (e.items.size() < 2) continue;
        const auto& ids = e.items.items();
        for (std::size_t drop = 0; drop < ids.size(); ++drop) {
            std::vector<ItemId> sub;
            for (std::size_t i = 0; i < ids.size(); ++i)
                if (i != drop) sub.push_back(ids[i]);
            auto parent = index.support_of(Itemset::from_sorted(sub));
            REQUIRE(parent.has_value()); // downward closure
            CHECK(*parent >= e.support); // anti-monotonicity
        }
    }
}

TEST_CASE("frequent_subsets_of matches a direct filter") {
    SplitMix64 rng(31);
    TransactionDb db = random_db(rng, 9, 100);
    FrequentSetIndex index = mine_frequent(db, 2);

    for (int round = 0; round < 30; ++round) {
        std::vector<ItemId> t;
        for (ItemId i = 0; i < 9; ++i)
            if (rng.next_below(2) == 0) t.push_back(i);

        std::vector<FrequentEntry> expected;
        for (const FrequentEntry& e : index.entries())
            if (e.items.subset_of(t)) expected.push_back(e);
        CHECK(frequent_subsets_of(t, index) == expected);
    }
}

TEST_CASE("from_entries validates structure") {
    auto entry = [](std::vector<ItemId> ids, std::uint32_t support) {
        return FrequentEntry{Itemset(std::move(ids)), support};
    };

    // a valid small index round-trips
    std::vector<FrequentEntry> good = {entry({0}, 3), entry({1}, 2), entry({0, 1}, 2)};
    FrequentSetIndex ok = FrequentSetIndex::from_entries(good, 2, 5);
    CHECK(ok.entries().size() == 3);

    CHECK_THROWS_WITH_AS(
        FrequentSetIndex::from_entries({entry({0}, 1)}, 2, 5),
        "frequent set index: entry below minsup", DataError);
    CHECK_THROWS_WITH_AS(
        FrequentSetIndex::from_entries({entry({0}, 6)}, 2, 5),
        "frequent set index: support exceeds transaction count", DataError);
    CHECK_THROWS_WITH_AS(
        FrequentSetIndex::from_entries({entry({0}, 3), entry({0}, 3)}, 2, 5),
        "frequent set index: duplicate entry", DataError);
    // {0,1} without {1}
    CHECK_THROWS_WITH_AS(
        FrequentSetIndex::from_entries({entry({0}, 3), entry({0, 1}, 2)}, 2, 5),
        "frequent set index: downward closure violated", DataError);
    // pair more frequent than a member
    CHECK_THROWS_WITH_AS(
        FrequentSetIndex::from_entries({entry({0}, 2), entry({1}, 3), entry({0, 1}, 3)}, 2, 5),
        "frequent set index: anti-monotonicity violated", DataError);
    CHECK_THROWS_WITH_AS(
        FrequentSetIndex::from_entries({entry({}, 3)}, 2, 5),
        "frequent set index: empty itemset entry", DataError);
}

TEST_CASE("quantities do not affect support counting") {
    TransactionDb db;
    Transaction t1 = txn("t1", {0, 1});
    t1.lines[0].quantity = 7; // same basket, bigger purchase
    db.transactions.push_back(t1);
    db.transactions.push_back(txn("t2", {0, 1}));
    FrequentSetIndex index = mine_frequent(db, 2);
    CHECK(index.support_of(Itemset{0, 1}) == std::uint32_t{2});
}
