#include "profset/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "profset/errors.hpp"
#include "profset/model.hpp"

namespace profset {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::int64_t parse_int(const std::string& field, const char* what, std::size_t line_no) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || field.empty())
        throw DataError("line " + std::to_string(line_no) + ": malformed " + what +
                        " '" + field + "' (expected integer)");
    return value;
}

/// Reads lines, strips trailing '\r', skips blank and '#'-comment lines, and
/// calls fn(fields, line_no). Returns the number of data rows seen.
template <typename Fn>
std::size_t for_each_row(std::istream& source, const std::string& expected_header, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t rows = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != expected_header)
                throw DataError("line " + std::to_string(line_no) + ": expected header '" +
                                expected_header + "', got '" + line + "'");
            header_seen = true;
            continue;
        }
        auto fields = split_fields(line);
        const auto expected_cols =
            static_cast<std::size_t>(std::count(expected_header.begin(), expected_header.end(), ',')) + 1;
        if (fields.size() != expected_cols)
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_cols) + " columns, got " +
                            std::to_string(fields.size()));
        fn(fields, line_no);
        ++rows;
    }
    return rows;
}

} // namespace

Catalog load_catalog(std::istream& source) {
    std::vector<Product> products;
    std::map<std::string, std::string> category_names;

    std::size_t rows = for_each_row(
        source, "product_id,name,category_id,category_name,unit_margin,cost",
        [&](const std::vector<std::string>& f, std::size_t line_no) {
            Product p;
            p.id = f[0];
            p.name = f[1];
            p.category_id = f[2];
            p.unit_margin = Money{parse_int(f[4], "unit_margin", line_no)};
            p.cost = Money{parse_int(f[5], "cost", line_no)};
            if (p.id.empty())
                throw DataError("line " + std::to_string(line_no) + ": empty product id");
            if (p.cost < Money{0})
                throw DataError("line " + std::to_string(line_no) + ": negative cost for product '" +
                                p.id + "'");
            auto [it, inserted] = category_names.emplace(p.category_id, f[3]);
            if (!inserted && it->second != f[3])
                throw DataError("line " + std::to_string(line_no) + ": category '" + p.category_id +
                                "' renamed from '" + it->second + "' to '" + f[3] + "'");
            products.push_back(std::move(p));
        });
    if (rows == 0) throw DataError("empty catalog");
    return Catalog::build(std::move(products), std::move(category_names));
}

TransactionDb load_transactions(std::istream& source, const Catalog& catalog) {
    // txn id -> (item -> quantity); first-appearance order preserved.
    std::vector<std::string> order;
    std::unordered_map<std::string, std::map<ItemId, std::uint64_t>> grouped;

    std::size_t rows = for_each_row(
        source, "transaction_id,product_id,quantity",
        [&](const std::vector<std::string>& f, std::size_t line_no) {
            auto item = catalog.find_item(f[1]);
            if (!item)
                throw DataError("line " + std::to_string(line_no) + ": unknown product '" + f[1] + "'");
            std::int64_t qty = parse_int(f[2], "quantity", line_no);
            if (qty <= 0)
                throw DataError("line " + std::to_string(line_no) + ": quantity must be positive, got " +
                                std::to_string(qty));
            auto [it, inserted] = grouped.try_emplace(f[0]);
            if (inserted) order.push_back(f[0]);
            it->second[*item] += static_cast<std::uint64_t>(qty);
        });
    if (rows == 0) throw DataError("empty transaction file");

    TransactionDb db;
    db.transactions.reserve(order.size());
    for (const std::string& id : order) {
        Transaction t;
        t.id = id;
        for (auto [item, qty] : grouped.at(id))
            t.lines.push_back({item, static_cast<std::uint32_t>(qty)});
        db.transactions.push_back(std::move(t));
    }
    return db;
}

void load_constraint_overrides(std::istream& source, ConstraintConfig& cfg) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool has_cap = false;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line == "category_id,item_min")
                has_cap = false;
            else if (line == "category_id,item_min,item_cap")
                has_cap = true;
            else
                throw DataError("line " + std::to_string(line_no) +
                                ": expected header 'category_id,item_min[,item_cap]', got '" +
                                line + "'");
            header_seen = true;
            continue;
        }
        auto fields = split_fields(line);
        const std::size_t expected_cols = has_cap ? 3 : 2;
        if (fields.size() != expected_cols)
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_cols) + " columns, got " +
                            std::to_string(fields.size()));
        std::int64_t minimum = parse_int(fields[1], "item_min", line_no);
        if (minimum < 0)
            throw DataError("line " + std::to_string(line_no) + ": item_min must be >= 0, got " +
                            std::to_string(minimum));
        if (!cfg.item_min.emplace(fields[0], static_cast<std::uint32_t>(minimum)).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate category '" +
                            fields[0] + "'");
        if (has_cap) {
            std::int64_t cap = parse_int(fields[2], "item_cap", line_no);
            if (cap < 1)
                throw DataError("line " + std::to_string(line_no) +
                                ": item_cap must be >= 1, got " + std::to_string(cap));
            cfg.item_cap.emplace(fields[0], static_cast<std::uint32_t>(cap));
        }
    }
    if (!header_seen) throw DataError("empty constraint override file");
}

void write_catalog_csv(std::ostream& out, const Catalog& catalog) {
    out << "product_id,name,category_id,category_name,unit_margin,cost\n";
    for (const Product& p : catalog.products()) {
        const Category& c = catalog.category_of(*catalog.find_item(p.id));
        out << p.id << ',' << p.name << ',' << p.category_id << ',' << c.name << ','
            << p.unit_margin.minor_units << ',' << p.cost.minor_units << '\n';
    }
}

void write_baskets_csv(std::ostream& out, const TransactionDb& db, const Catalog& catalog) {
    out << "transaction_id,product_id,quantity\n";
    for (const Transaction& t : db.transactions)
        for (const auto& line : t.lines)
            out << t.id << ',' << catalog.product_id(line.item) << ',' << line.quantity << '\n';
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

Catalog load_catalog_file(const std::string& path) {
    auto in = open_input(path);
    return load_catalog(in);
}

TransactionDb load_transactions_file(const std::string& path, const Catalog& catalog) {
    auto in = open_input(path);
    return load_transactions(in, catalog);
}

void load_constraint_overrides_file(const std::string& path, ConstraintConfig& cfg) {
    auto in = open_input(path);
    load_constraint_overrides(in, cfg);
}

void write_catalog_file(const std::string& path, const Catalog& catalog) {
    auto out = open_output(path);
    write_catalog_csv(out, catalog);
}

void write_baskets_file(const std::string& path, const TransactionDb& db, const Catalog& catalog) {
    auto out = open_output(path);
    write_baskets_csv(out, db, catalog);
}

} // namespace profset
