#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "profset/catalog.hpp"
#include "profset/csv.hpp"
#include "profset/errors.hpp"
#include "profset/model.hpp"
#include "profset/rng.hpp"
#include "profset/synth.hpp"
#include "profset/transaction.hpp"

using namespace profset;

namespace {

const char* kCatalogCsv =
    "product_id,name,category_id,category_name,unit_margin,cost\n"
    "cola,Cola 1l,drinks,Drinks,10,2\n"
    "peanuts,Peanuts 200g,snacks,Snacks,5,1\n"
    "cheese,Gouda 48+,dairy,Dairy,8,0\n";

Catalog snack_catalog() {
    std::istringstream in(kCatalogCsv);
    return load_catalog(in);
}

template <typename E, typename Fn>
std::string message_of(Fn&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    FAIL("expected exception was not thrown");
    return {};
}

} // namespace

TEST_CASE("catalog orders products by id and derives categories") {
    Catalog cat = snack_catalog();
    REQUIRE(cat.product_count() == 3);
    // cheese < cola < peanuts lexicographically
    CHECK(cat.product_id(0) == "cheese");
    CHECK(cat.product_id(1) == "cola");
    CHECK(cat.product_id(2) == "peanuts");
    CHECK(cat.find_item("cola") == ItemId{1});
    CHECK_FALSE(cat.find_item("beer").has_value());

    REQUIRE(cat.category_count() == 3);
    CHECK(cat.categories()[0].id == "dairy");
    CHECK(cat.category_of(1).id == "drinks");
    CHECK(cat.category_of(1).name == "Drinks");
    CHECK(cat.find_category("snacks") == std::size_t{2});
    CHECK(cat.categories()[2].member_items == std::vector<ItemId>{2});
}

TEST_CASE("catalog rejects bad input") {
    CHECK_THROWS_WITH_AS(Catalog::build({}, {}), "empty catalog", DataError);

    std::vector<Product> dup = {{"a", "A", "c", Money{1}, Money{0}},
                                {"a", "A2", "c", Money{1}, Money{0}}};
    CHECK_THROWS_WITH_AS(Catalog::build(dup, {}), "duplicate product id 'a'", DataError);

    std::vector<Product> neg = {{"a", "A", "c", Money{1}, Money{-1}}};
    CHECK_THROWS_WITH_AS(Catalog::build(neg, {}), "negative cost for product 'a'", DataError);

    std::vector<Product> nocat = {{"a", "A", "", Money{1}, Money{0}}};
    CHECK_THROWS_WITH_AS(Catalog::build(nocat, {}), "product 'a' has empty category id",
                         DataError);
}

TEST_CASE("catalog csv errors carry line numbers") {
    {
        std::istringstream in("product_id,name\nx,y\n");
        auto msg = message_of<DataError>([&] { load_catalog(in); });
        CHECK(msg.find("line 1") != std::string::npos);
        CHECK(msg.find("expected header") != std::string::npos);
    }
    {
        std::istringstream in(
            "product_id,name,category_id,category_name,unit_margin,cost\n"
            "cola,Cola,drinks,Drinks,ten,2\n");
        auto msg = message_of<DataError>([&] { load_catalog(in); });
        CHECK(msg == "line 2: malformed unit_margin 'ten' (expected integer)");
    }
    {
        std::istringstream in(
            "product_id,name,category_id,category_name,unit_margin,cost\n"
            "# comment line\n"
            "\n"
            "cola,Cola,drinks,Drinks,10\n");
        auto msg = message_of<DataError>([&] { load_catalog(in); });
        CHECK(msg == "line 4: expected 6 columns, got 5");
    }
    {
        std::istringstream in(
            "product_id,name,category_id,category_name,unit_margin,cost\n"
            "cola,Cola,drinks,Drinks,10,2\n"
            "fanta,Fanta,drinks,Sodas,9,1\n");
        auto msg = message_of<DataError>([&] { load_catalog(in); });
        CHECK(msg == "line 3: category 'drinks' renamed from 'Drinks' to 'Sodas'");
    }
    {
        std::istringstream in("product_id,name,category_id,category_name,unit_margin,cost\n");
        CHECK_THROWS_WITH_AS(load_catalog(in), "empty catalog", DataError);
    }
}

TEST_CASE("basket csv groups rows and validates") {
    Catalog cat = snack_catalog();
    std::istringstream in(
        "transaction_id,product_id,quantity\n"
        "t2,cola,1\r\n"
        "t1,peanuts,2\n"
        "t2,cheese,1\n"
        "t2,cola,3\n");
    TransactionDb db = load_transactions(in, cat);
    REQUIRE(db.size() == 2);
    CHECK(db.transactions[0].id == "t2"); // first appearance wins
    CHECK(db.transactions[1].id == "t1");
    // repeated (t2, cola) rows sum quantities; lines sorted by item
    REQUIRE(db.transactions[0].lines.size() == 2);
    CHECK(db.transactions[0].lines[0] == Transaction::Line{*cat.find_item("cheese"), 1});
    CHECK(db.transactions[0].lines[1] == Transaction::Line{*cat.find_item("cola"), 4});
    CHECK(db.transactions[0].item_set() ==
          std::vector<ItemId>{*cat.find_item("cheese"), *cat.find_item("cola")});

    std::istringstream unknown(
        "transaction_id,product_id,quantity\n"
        "t1,beer,1\n");
    auto msg = message_of<DataError>([&] { load_transactions(unknown, cat); });
    CHECK(msg == "line 2: unknown product 'beer'");

    std::istringstream zero(
        "transaction_id,product_id,quantity\n"
        "t1,cola,0\n");
    auto msg2 = message_of<DataError>([&] { load_transactions(zero, cat); });
    CHECK(msg2 == "line 2: quantity must be positive, got 0");

    std::istringstream empty("transaction_id,product_id,quantity\n");
    CHECK_THROWS_WITH_AS(load_transactions(empty, cat), "empty transaction file", DataError);
}

TEST_CASE("csv round-trips catalogs and baskets") {
    Catalog cat = snack_catalog();
    std::ostringstream cat_out;
    write_catalog_csv(cat_out, cat);
    std::istringstream cat_in(cat_out.str());
    Catalog cat2 = load_catalog(cat_in);
    REQUIRE(cat2.product_count() == cat.product_count());
    for (ItemId i = 0; i < cat.product_count(); ++i) {
        CHECK(cat2.product(i).id == cat.product(i).id);
        CHECK(cat2.product(i).unit_margin == cat.product(i).unit_margin);
        CHECK(cat2.product(i).cost == cat.product(i).cost);
        CHECK(cat2.category_of(i).id == cat.category_of(i).id);
    }

    std::istringstream in(
        "transaction_id,product_id,quantity\n"
        "t1,cola,2\n"
        "t1,cheese,1\n"
        "t2,peanuts,5\n");
    TransactionDb db = load_transactions(in, cat);
    std::ostringstream db_out;
    write_baskets_csv(db_out, db, cat);
    std::istringstream db_in(db_out.str());
    CHECK(load_transactions(db_in, cat) == db);
}

TEST_CASE("constraint override csv") {
    {
        ConstraintConfig cfg;
        std::istringstream in(
            "category_id,item_min,item_cap\n"
            "drinks,2,3\n"
            "dairy,0,1\n");
        load_constraint_overrides(in, cfg);
        CHECK(cfg.item_min.at("drinks") == 2);
        CHECK(cfg.item_cap.at("drinks") == 3);
        CHECK(cfg.item_min.at("dairy") == 0);
    }
    {
        ConstraintConfig cfg;
        std::istringstream in(
            "category_id,item_min\n"
            "snacks,1\n");
        load_constraint_overrides(in, cfg);
        CHECK(cfg.item_min.at("snacks") == 1);
        CHECK(cfg.item_cap.empty());
    }
    {
        ConstraintConfig cfg;
        std::istringstream in(
            "category_id,item_min\n"
            "snacks,1\n"
            "snacks,2\n");
        auto msg = message_of<DataError>([&] { load_constraint_overrides(in, cfg); });
        CHECK(msg == "line 3: duplicate category 'snacks'");
    }
    {
        ConstraintConfig cfg;
        std::istringstream in("category,minimum\n");
        auto msg = message_of<DataError>([&] { load_constraint_overrides(in, cfg); });
        CHECK(msg.find("expected header 'category_id,item_min[,item_cap]'") !=
              std::string::npos);
    }
}

TEST_CASE("transaction margins are quantity weighted") {
    Catalog cat = snack_catalog();
    ItemId cheese = *cat.find_item("cheese");
    ItemId cola = *cat.find_item("cola");
    ItemId peanuts = *cat.find_item("peanuts");

    Transaction t;
    t.id = "t";
    t.lines = {{cheese, 2}, {cola, 1}, {peanuts, 3}};
    CHECK(transaction_margin(t, cat) == Money{2 * 8 + 10 + 3 * 5});
    CHECK(itemset_margin_in(Itemset{cola, peanuts}, t, cat) == Money{10 + 15});
    CHECK(itemset_margin_in(Itemset{cheese}, t, cat) == Money{16});
    // items absent from the transaction contribute nothing
    Transaction only_cola;
    only_cola.id = "o";
    only_cola.lines = {{cola, 1}};
    CHECK(itemset_margin_in(Itemset{cola, peanuts}, only_cola, cat) == Money{10});
}

TEST_CASE("splitmix64 streams are reproducible and key separated") {
    SplitMix64 a(123), b(123), c(124);
    for (int i = 0; i < 100; ++i) {
        std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
    }
    bool all_equal = true;
    SplitMix64 a2(123);
    for (int i = 0; i < 100; ++i) all_equal = all_equal && (a2.next_u64() == c.next_u64());
    CHECK_FALSE(all_equal);

    CHECK(derive_stream_seed(7, "t1") != derive_stream_seed(7, "t2"));
    CHECK(derive_stream_seed(7, "t1") != derive_stream_seed(8, "t1"));
    CHECK(derive_stream_seed(7, "t1") == derive_stream_seed(7, "t1"));

    SplitMix64 r(99);
    for (int i = 0; i < 1000; ++i) {
        std::uint64_t v = r.next_below(7);
        CHECK(v < 7);
    }
    CHECK(SplitMix64(5).next_below(1) == 0);
    for (int i = 0; i < 50; ++i) {
        std::int64_t v = SplitMix64(i).next_in(-3, 3);
        CHECK(v >= -3);
        CHECK(v <= 3);
    }
}

TEST_CASE("bernoulli thresholds are exact at the ends") {
    CHECK(probability_threshold(0.0) == 0);
    CHECK(probability_threshold(1.0) == 9007199254740992ull);
    CHECK(probability_threshold(0.5) == 4503599627370496ull);
    CHECK_THROWS_AS(probability_threshold(-0.1), DataError);
    CHECK_THROWS_AS(probability_threshold(1.1), DataError);

    SplitMix64 rng(1);
    for (int i = 0; i < 200; ++i) CHECK_FALSE(rng.next_bernoulli(probability_threshold(0.0)));
    for (int i = 0; i < 200; ++i) CHECK(rng.next_bernoulli(probability_threshold(1.0)));
}

namespace {

SynthConfig demo_config() {
    SynthConfig cfg;
    cfg.product_count = 60;
    cfg.category_count = 10;
    cfg.basket_count = 800;
    cfg.mean_basket_size = 8.0;
    cfg.margin_min = 5;
    cfg.margin_max = 50;
    cfg.cost_min = 0;
    cfg.cost_max = 10;
    cfg.rare_category_count = 1;
    cfg.planted.push_back({{0, 7}, 0.10});
    cfg.planted.push_back({{12, 19, 25}, 0.06});
    return cfg;
}

std::string serialize(const Catalog& cat, const TransactionDb& db) {
    std::ostringstream out;
    write_catalog_csv(out, cat);
    write_baskets_csv(out, db, cat);
    return out.str();
}

} // namespace

TEST_CASE("synthetic generator is a pure function of config and seed") {
    SynthConfig cfg = demo_config();
    auto [cat1, db1] = generate_synthetic(cfg, 11);
    auto [cat2, db2] = generate_synthetic(cfg, 11);
    CHECK(serialize(cat1, db1) == serialize(cat2, db2));

    auto [cat3, db3] = generate_synthetic(cfg, 12);
    CHECK(serialize(cat1, db1) != serialize(cat3, db3));
}

TEST_CASE("synthetic generator respects the configured shape") {
    SynthConfig cfg = demo_config();
    auto [cat, db] = generate_synthetic(cfg, 3);
    CHECK(cat.product_count() == 60);
    CHECK(cat.category_count() == 10);
    CHECK(db.size() == 800);

    // zero-padded ids sort like their numeric order
    CHECK(cat.product_id(0) == "P00");
    CHECK(cat.product_id(59) == "P59");
    for (ItemId i = 0; i + 1 < 60; ++i) CHECK(cat.product_id(i) < cat.product_id(i + 1));

    for (const Transaction& t : db.transactions) {
        CHECK(!t.lines.empty());
        for (std::size_t i = 0; i + 1 < t.lines.size(); ++i)
            CHECK(t.lines[i].item < t.lines[i + 1].item);
        for (const auto& line : t.lines) CHECK(line.quantity >= 1);
    }

    for (const Product& p : cat.products()) {
        CHECK(p.unit_margin.minor_units >= 5);
        CHECK(p.unit_margin.minor_units <= 50);
        CHECK(p.cost.minor_units >= 0);
        CHECK(p.cost.minor_units <= 10);
    }
}

TEST_CASE("planted itemsets appear all-or-nothing and near their rate") {
    SynthConfig cfg = demo_config();
    auto [cat, db] = generate_synthetic(cfg, 17);

    auto contains = [&](const Transaction& t, ItemId i) {
        auto ids = t.item_set();
        return std::binary_search(ids.begin(), ids.end(), i);
    };

    for (const auto& planted : cfg.planted) {
        std::vector<ItemId> members;
        for (std::uint32_t idx : planted.product_indexes)
            members.push_back(static_cast<ItemId>(idx));
        std::size_t whole = 0;
        std::size_t any = 0;
        for (const Transaction& t : db.transactions) {
            bool all = true;
            bool one = false;
            for (ItemId m : members) {
                if (contains(t, m)) one = true;
                else all = false;
            }
            whole += all && one;
            any += one;
        }
        // members never appear outside their planted set
        CHECK(whole == any);
        // observed rate within 3 sigma of the configured probability
        double expected = planted.probability * cfg.basket_count;
        double sigma = std::sqrt(cfg.basket_count * planted.probability *
                                 (1.0 - planted.probability));
        CHECK(std::abs(static_cast<double>(whole) - expected) <= 3.0 * sigma);
    }
}

TEST_CASE("basket sizes track the configured mean") {
    SynthConfig cfg = demo_config();
    cfg.planted.clear();
    cfg.rare_category_count = 0;
    auto [cat, db] = generate_synthetic(cfg, 23);
    double total = 0;
    for (const Transaction& t : db.transactions) total += static_cast<double>(t.lines.size());
    double mean = total / static_cast<double>(db.size());
    // basket size is Binomial(2*mean, 1/2): variance mean/2
    double se = std::sqrt(cfg.mean_basket_size / 2.0 / static_cast<double>(db.size()));
    CHECK(std::abs(mean - cfg.mean_basket_size) <= 3.0 * se);
}

TEST_CASE("rare categories stay out of filler draws") {
    SynthConfig cfg = demo_config();
    cfg.planted.clear();
    cfg.rare_category_count = 2;
    auto [cat, db] = generate_synthetic(cfg, 5);
    // the trailing two categories have filler weight 1 vs 10000: the odds
    // of even one appearance across 800 baskets are negligible
    std::size_t rare_hits = 0;
    for (const Transaction& t : db.transactions)
        for (const auto& line : t.lines)
            if (cat.category_of(line.item).id >= "C8") ++rare_hits;
    CHECK(rare_hits <= 2);
}

TEST_CASE("synth config parsing and validation") {
    SynthConfig cfg = SynthConfig::from_json_text(R"({
        "product_count": 10, "category_count": 2, "basket_count": 5,
        "mean_basket_size": 3.0,
        "planted": [{"items": [0, 1], "probability": 0.5}]
    })");
    CHECK(cfg.product_count == 10);
    CHECK(cfg.planted.size() == 1);
    CHECK(cfg.planted[0].product_indexes == std::vector<std::uint32_t>{0, 1});

    CHECK_THROWS_AS(SynthConfig::from_json_text("{nope"), DataError);
    CHECK_THROWS_AS(SynthConfig::from_json_text("{}"), DataError);

    SynthConfig bad = cfg;
    bad.planted[0].product_indexes = {0, 99};
    auto msg = message_of<DataError>([&] { bad.validate(); });
    CHECK(msg == "planted itemset 0 references nonexistent product index 99");

    bad = cfg;
    bad.planted[0].probability = 1.5;
    msg = message_of<DataError>([&] { bad.validate(); });
    CHECK(msg == "planted itemset 0 probability outside [0,1]");

    bad = cfg;
    bad.category_count = 11;
    CHECK_THROWS_WITH_AS(bad.validate(), "category_count must be in [1, product_count]",
                         DataError);

    bad = cfg;
    bad.rare_category_count = 2;
    CHECK_THROWS_WITH_AS(bad.validate(), "rare_category_count must be below category_count",
                         DataError);

    bad = cfg;
    bad.margin_min = 9;
    bad.margin_max = 3;
    CHECK_THROWS_WITH_AS(bad.validate(), "margin_min exceeds margin_max", DataError);
}

TEST_CASE("money arithmetic stays in integer minor units") {
    Money a{250};
    Money b{-40};
    CHECK(a + b == Money{210});
    CHECK(a - b == Money{290});
    CHECK(-b == Money{40});
    CHECK(a * 3 == Money{750});
    CHECK(2 * b == Money{-80});
    a += Money{1};
    CHECK(a.minor_units == 251);
    CHECK(to_string(Money{-7}) == "-7");
    CHECK(Money{3} < Money{4});
}
