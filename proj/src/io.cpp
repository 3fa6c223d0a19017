#include "profset/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "profset/errors.hpp"

namespace profset {
namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string(what) + ": " + e.what());
    }
}

json meta_line(std::istream& in, const char* expected_type) {
    std::string line;
    if (!std::getline(in, line))
        throw DataError(std::string(expected_type) + ": missing meta line");
    json meta = parse_json(line, expected_type);
    if (meta.value("type", "") != expected_type)
        throw DataError(std::string(expected_type) + ": unexpected artifact type '" +
                        meta.value("type", "") + "'");
    return meta;
}

json id_array(const Itemset& set, const Catalog& catalog) {
    json a = json::array();
    for (ItemId i : set) a.push_back(catalog.product_id(i));
    return a;
}

Itemset itemset_from_ids(const json& a, const Catalog& catalog, const char* what) {
    std::vector<ItemId> ids;
    ids.reserve(a.size());
    for (const auto& v : a) {
        std::string id = v.get<std::string>();
        auto item = catalog.find_item(id);
        if (!item) throw DataError(std::string(what) + ": unknown product id '" + id + "'");
        ids.push_back(*item);
    }
    return Itemset(std::move(ids));
}

template <typename T>
T field(const json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end())
        throw DataError(std::string(what) + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string(what) + ": field '" + key + "': " + e.what());
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return in;
}

std::string rational_string(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

} // namespace

void dump_frequent_sets(std::ostream& out, const FrequentSetIndex& index,
                        const Catalog& catalog) {
    json meta = {{"type", "profset/frequent-sets"},
                 {"minsup", index.minsup()},
                 {"txn_count", index.txn_count()},
                 {"entry_count", index.entries().size()}};
    out << meta.dump() << '\n';
    for (const FrequentEntry& e : index.entries()) {
        json line = {{"items", id_array(e.items, catalog)}, {"support", e.support}};
        out << line.dump() << '\n';
    }
}

FrequentSetIndex load_frequent_sets(std::istream& in, const Catalog& catalog) {
    const char* what = "profset/frequent-sets";
    json meta = meta_line(in, what);
    auto minsup = field<std::uint32_t>(meta, "minsup", what);
    auto txn_count = field<std::uint32_t>(meta, "txn_count", what);
    auto entry_count = field<std::size_t>(meta, "entry_count", what);

    std::vector<FrequentEntry> entries;
    entries.reserve(entry_count);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = parse_json(line, what);
        FrequentEntry e;
        e.items = itemset_from_ids(field<json>(j, "items", what), catalog, what);
        e.support = field<std::uint32_t>(j, "support", what);
        entries.push_back(std::move(e));
    }
    if (entries.size() != entry_count)
        throw DataError(std::string(what) + ": entry_count says " + std::to_string(entry_count) +
                        " but file has " + std::to_string(entries.size()) + " entries");
    return FrequentSetIndex::from_entries(std::move(entries), minsup, txn_count);
}

void dump_allocation(std::ostream& out, const AllocationResult& result, const Catalog& catalog) {
    json meta = {{"type", "profset/allocation"},
                 {"seed", result.seed},
                 {"mode", to_string(result.mode)},
                 {"total_input_minor_units", result.total_input.minor_units}};
    out << meta.dump() << '\n';
    for (const auto& [set, margin] : result.set_margins) {
        json line = {{"itemset", id_array(set, catalog)},
                     {"margin_minor_units", margin.minor_units}};
        out << line.dump() << '\n';
    }
    for (const auto& [item, margin] : result.item_residuals) {
        json line = {{"residual_item", catalog.product_id(item)},
                     {"margin_minor_units", margin.minor_units}};
        out << line.dump() << '\n';
    }
}

AllocationResult load_allocation(std::istream& in, const Catalog& catalog) {
    const char* what = "profset/allocation";
    json meta = meta_line(in, what);

    AllocationResult result;
    result.seed = field<std::uint64_t>(meta, "seed", what);
    result.mode = allocation_mode_from_string(field<std::string>(meta, "mode", what));
    result.total_input = Money{field<std::int64_t>(meta, "total_input_minor_units", what)};

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = parse_json(line, what);
        Money margin{field<std::int64_t>(j, "margin_minor_units", what)};
        if (j.contains("itemset")) {
            Itemset set = itemset_from_ids(j["itemset"], catalog, what);
            if (!result.set_margins.emplace(std::move(set), margin).second)
                throw DataError(std::string(what) + ": duplicate itemset entry");
        } else if (j.contains("residual_item")) {
            std::string id = field<std::string>(j, "residual_item", what);
            auto item = catalog.find_item(id);
            if (!item)
                throw DataError(std::string(what) + ": unknown product id '" + id + "'");
            if (!result.item_residuals.emplace(*item, margin).second)
                throw DataError(std::string(what) + ": duplicate residual entry");
        } else {
            throw DataError(std::string(what) + ": line is neither itemset nor residual");
        }
    }
    if (result.allocated_total() + result.residual_total() != result.total_input)
        throw DataError(std::string(what) +
                        ": margins do not add up to total_input_minor_units");
    return result;
}

void dump_model(std::ostream& out, const ProfsetModel& model) {
    json items = json::array();
    for (const auto& item : model.items)
        items.push_back({{"product_id", item.product_id},
                         {"category_id", item.category_id},
                         {"cost_minor_units", item.cost.minor_units}});
    json categories = json::array();
    for (std::size_t c = 0; c < model.category_ids.size(); ++c)
        categories.push_back({{"id", model.category_ids[c]},
                              {"min", model.category_min[c]},
                              {"cap", model.category_cap[c]}});
    json sets = json::array();
    for (const auto& set : model.sets) {
        json ids = json::array();
        for (ItemId i : set.items) ids.push_back(model.items[i].product_id);
        sets.push_back({{"items", ids}, {"margin_minor_units", set.margin.minor_units}});
    }
    json doc = {{"type", "profset/model"},
                {"item_max", model.item_max},
                {"categories", categories},
                {"items", items},
                {"sets", sets}};
    out << doc.dump(2) << '\n';
}

ProfsetModel load_model(std::istream& in) {
    const char* what = "profset/model";
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc = parse_json(buffer.str(), what);
    if (doc.value("type", "") != what)
        throw DataError(std::string(what) + ": unexpected artifact type '" +
                        doc.value("type", "") + "'");

    ProfsetModel model;
    model.item_max = field<std::uint32_t>(doc, "item_max", what);
    for (const json& c : field<json>(doc, "categories", what)) {
        model.category_ids.push_back(field<std::string>(c, "id", what));
        model.category_min.push_back(field<std::uint32_t>(c, "min", what));
        model.category_cap.push_back(field<std::uint32_t>(c, "cap", what));
    }
    if (!std::is_sorted(model.category_ids.begin(), model.category_ids.end()))
        throw DataError(std::string(what) + ": categories not sorted by id");

    for (const json& j : field<json>(doc, "items", what)) {
        ProfsetModel::Item item;
        item.product_id = field<std::string>(j, "product_id", what);
        item.category_id = field<std::string>(j, "category_id", what);
        item.cost = Money{field<std::int64_t>(j, "cost_minor_units", what)};
        auto c = std::lower_bound(model.category_ids.begin(), model.category_ids.end(),
                                  item.category_id);
        if (c == model.category_ids.end() || *c != item.category_id)
            throw DataError(std::string(what) + ": item '" + item.product_id +
                            "' references unknown category '" + item.category_id + "'");
        model.item_category.push_back(
            static_cast<std::uint32_t>(c - model.category_ids.begin()));
        model.items.push_back(std::move(item));
    }

    for (const json& j : field<json>(doc, "sets", what)) {
        Money margin{field<std::int64_t>(j, "margin_minor_units", what)};
        if (margin <= Money{0}) continue;
        std::vector<ItemId> ids;
        for (const auto& v : field<json>(j, "items", what)) {
            std::string id = v.get<std::string>();
            auto it = std::lower_bound(model.items.begin(), model.items.end(), id,
                                       [](const ProfsetModel::Item& item, const std::string& key) {
                                           return item.product_id < key;
                                       });
            if (it == model.items.end() || it->product_id != id)
                throw DataError(std::string(what) + ": set references unknown product id '" + id +
                                "'");
            ids.push_back(static_cast<ItemId>(it - model.items.begin()));
        }
        model.sets.push_back({Itemset(std::move(ids)), margin});
    }
    std::sort(model.sets.begin(), model.sets.end(),
              [](const ProfsetModel::SetTerm& a, const ProfsetModel::SetTerm& b) {
                  return a.items < b.items;
              });

    validate_model(model);
    return model;
}

void dump_solution(std::ostream& out, const Solution& solution, const ProfsetModel& model) {
    json selected = json::array();
    for (std::uint32_t i : solution.selected) selected.push_back(model.items[i].product_id);
    json active = json::array();
    for (const Itemset& set : solution.active_sets) {
        json ids = json::array();
        for (ItemId i : set) ids.push_back(model.items[i].product_id);
        active.push_back(ids);
    }
    json doc = {{"type", "profset/solution"},
                {"selected", selected},
                {"active_sets", active},
                {"objective_minor_units", solution.objective.minor_units},
                {"proof", solution.proof == Solution::Proof::optimal ? "optimal" : "heuristic"},
                {"nodes_explored", solution.nodes_explored}};
    out << doc.dump(2) << '\n';
}

Solution load_solution(std::istream& in, const ProfsetModel& model) {
    const char* what = "profset/solution";
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc = parse_json(buffer.str(), what);
    if (doc.value("type", "") != what)
        throw DataError(std::string(what) + ": unexpected artifact type '" +
                        doc.value("type", "") + "'");

    auto index_of = [&](const std::string& id) {
        auto it = std::lower_bound(model.items.begin(), model.items.end(), id,
                                   [](const ProfsetModel::Item& item, const std::string& key) {
                                       return item.product_id < key;
                                   });
        if (it == model.items.end() || it->product_id != id)
            throw DataError(std::string(what) + ": unknown product id '" + id + "'");
        return static_cast<std::uint32_t>(it - model.items.begin());
    };

    Solution s;
    for (const auto& v : field<json>(doc, "selected", what))
        s.selected.push_back(index_of(v.get<std::string>()));
    std::sort(s.selected.begin(), s.selected.end());
    for (const auto& a : field<json>(doc, "active_sets", what)) {
        std::vector<ItemId> ids;
        for (const auto& v : a) ids.push_back(index_of(v.get<std::string>()));
        s.active_sets.push_back(Itemset(std::move(ids)));
    }
    s.objective = Money{field<std::int64_t>(doc, "objective_minor_units", what)};
    s.proof = field<std::string>(doc, "proof", what) == "optimal" ? Solution::Proof::optimal
                                                                  : Solution::Proof::heuristic;
    s.nodes_explored = field<std::uint64_t>(doc, "nodes_explored", what);

    if (objective_value(model, s.selected) != s.objective)
        throw DataError(std::string(what) +
                        ": objective_minor_units does not match the selected items");
    return s;
}

void dump_report(std::ostream& out, const Report& report) {
    json improvements = json::array();
    for (const CategoryImprovement& row : report.improvements) {
        json j = {{"category_id", row.category_id},
                  {"profset_pick", row.profset_pick},
                  {"naive_pick", row.naive_pick},
                  {"cross_profset_minor_units", row.cross_profset.minor_units},
                  {"cross_naive_minor_units", row.cross_naive.minor_units},
                  {"has_frequent_products", row.has_frequent_products},
                  {"applicable", row.applicable},
                  {"changed", row.changed}};
        j["improvement"] = row.applicable ? json(rational_string(row.improvement)) : json();
        improvements.push_back(std::move(j));
    }
    json breakdown = json::array();
    for (const ProfitBreakdown& row : report.breakdown)
        breakdown.push_back({{"product_id", row.product_id},
                             {"category_id", row.category_id},
                             {"own_minor_units", row.own_profit.minor_units},
                             {"cross_minor_units", row.cross_profit.minor_units},
                             {"total_minor_units", row.total.minor_units},
                             {"selected", row.selected}});
    json doc = {{"type", "profset/report"},
                {"profset_selection", report.profset_selection},
                {"naive_selection", report.naive_selection},
                {"profset_objective_minor_units", report.profset_objective.minor_units},
                {"naive_objective_minor_units", report.naive_objective.minor_units},
                {"categories_changed", report.categories_changed},
                {"categories_total", report.improvements.size()},
                {"improvements", improvements},
                {"breakdown", breakdown}};
    out << doc.dump(2) << '\n';
}

void dump_frequent_sets_file(const std::string& path, const FrequentSetIndex& index,
                             const Catalog& catalog) {
    auto out = open_out(path);
    dump_frequent_sets(out, index, catalog);
}

FrequentSetIndex load_frequent_sets_file(const std::string& path, const Catalog& catalog) {
    auto in = open_in(path);
    return load_frequent_sets(in, catalog);
}

void dump_allocation_file(const std::string& path, const AllocationResult& result,
                          const Catalog& catalog) {
    auto out = open_out(path);
    dump_allocation(out, result, catalog);
}

AllocationResult load_allocation_file(const std::string& path, const Catalog& catalog) {
    auto in = open_in(path);
    return load_allocation(in, catalog);
}

void dump_model_file(const std::string& path, const ProfsetModel& model) {
    auto out = open_out(path);
    dump_model(out, model);
}

ProfsetModel load_model_file(const std::string& path) {
    auto in = open_in(path);
    return load_model(in);
}

void dump_solution_file(const std::string& path, const Solution& solution,
                        const ProfsetModel& model) {
    auto out = open_out(path);
    dump_solution(out, solution, model);
}

Solution load_solution_file(const std::string& path, const ProfsetModel& model) {
    auto in = open_in(path);
    return load_solution(in, model);
}

void dump_report_file(const std::string& path, const Report& report) {
    auto out = open_out(path);
    dump_report(out, report);
}

void write_text_file(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

} // namespace profset
