#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "profset/allocate.hpp"
#include "profset/catalog.hpp"
#include "profset/csv.hpp"
#include "profset/errors.hpp"
#include "profset/io.hpp"
#include "profset/miner.hpp"
#include "profset/model.hpp"
#include "profset/report.hpp"
#include "profset/synth.hpp"

namespace {

using namespace profset;

/// Resolves the optimizer constraints: per-category minima start from the
/// override file (if any), every remaining category gets the default, and
/// item_max 0 means one slot per category.
ConstraintConfig make_constraints(const Catalog& catalog, std::uint32_t item_max,
                                  std::uint32_t item_min_default,
                                  const std::string& item_min_file) {
    ConstraintConfig cfg;
    if (!item_min_file.empty()) load_constraint_overrides_file(item_min_file, cfg);
    for (const Category& c : catalog.categories()) cfg.item_min.emplace(c.id, item_min_default);
    cfg.item_max = item_max != 0 ? item_max : static_cast<std::uint32_t>(catalog.category_count());
    return cfg;
}

/// The report stage recovers the constraints from the model artifact, so the
/// naive baseline always uses exactly the configuration the solver saw.
ConstraintConfig constraints_of(const ProfsetModel& model) {
    ConstraintConfig cfg;
    cfg.item_max = model.item_max;
    for (std::size_t c = 0; c < model.category_ids.size(); ++c) {
        cfg.item_min[model.category_ids[c]] = model.category_min[c];
        cfg.item_cap[model.category_ids[c]] = model.category_cap[c];
    }
    return cfg;
}

void stage_generate(const std::string& config_path, std::uint64_t seed,
                    const std::string& out_catalog, const std::string& out_baskets) {
    SynthConfig config = SynthConfig::from_json_file(config_path);
    auto [catalog, db] = generate_synthetic(config, seed);
    write_catalog_file(out_catalog, catalog);
    write_baskets_file(out_baskets, db, catalog);
}

void stage_mine(const std::string& catalog_path, const std::string& baskets_path,
                std::uint32_t minsup, std::size_t max_size, int threads,
                const std::string& out_path) {
    Catalog catalog = load_catalog_file(catalog_path);
    TransactionDb db = load_transactions_file(baskets_path, catalog);
    MineOptions options;
    options.max_itemset_size = max_size;
    options.threads = threads;
    FrequentSetIndex index = mine_frequent(db, minsup, options);
    dump_frequent_sets_file(out_path, index, catalog);
}

void stage_allocate(const std::string& catalog_path, const std::string& baskets_path,
                    const std::string& frequent_path, std::uint64_t seed,
                    const std::string& mode, int threads, const std::string& out_path) {
    Catalog catalog = load_catalog_file(catalog_path);
    TransactionDb db = load_transactions_file(baskets_path, catalog);
    FrequentSetIndex index = load_frequent_sets_file(frequent_path, catalog);
    AllocateOptions options;
    options.mode = allocation_mode_from_string(mode);
    options.threads = threads;
    AllocationResult result = allocate_all(db, index, catalog, seed, options);
    dump_allocation_file(out_path, result, catalog);
}

void stage_optimize(const std::string& catalog_path, const std::string& alloc_path,
                    std::uint32_t item_max, std::uint32_t item_min_default,
                    const std::string& item_min_file, std::uint64_t node_budget,
                    const std::string& out_model, const std::string& out_solution) {
    Catalog catalog = load_catalog_file(catalog_path);
    AllocationResult alloc = load_allocation_file(alloc_path, catalog);
    ConstraintConfig cfg = make_constraints(catalog, item_max, item_min_default, item_min_file);
    ProfsetModel model = build_model(alloc, catalog, cfg);
    SolveOptions solve_options;
    solve_options.node_budget = node_budget;
    Solution solution = solve_exact(model, solve_options);
    dump_model_file(out_model, model);
    dump_solution_file(out_solution, solution, model);
}

void stage_report(const std::string& catalog_path, const std::string& frequent_path,
                  const std::string& alloc_path, const std::string& model_path,
                  const std::string& solution_path, const std::string& out_text,
                  const std::string& out_json) {
    Catalog catalog = load_catalog_file(catalog_path);
    FrequentSetIndex index = load_frequent_sets_file(frequent_path, catalog);
    AllocationResult alloc = load_allocation_file(alloc_path, catalog);
    ProfsetModel model = load_model_file(model_path);
    Solution solution = load_solution_file(solution_path, model);
    Report report = build_report(catalog, index, alloc, model, solution, constraints_of(model));
    if (!out_json.empty()) dump_report_file(out_json, report);
    if (!out_text.empty())
        write_text_file(out_text, render_text_report(report));
    else if (out_json.empty())
        std::cout << render_text_report(report);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PROFSET: mine frequent itemsets from retail baskets, allocate transaction "
                 "margins to them, and pick the most profitable product assortment under "
                 "category constraints"};
    app.require_subcommand(1);

    std::string catalog_path, baskets_path, frequent_path, alloc_path;
    std::string model_path, solution_path;
    std::string config_path, out_catalog, out_baskets;
    std::string out_path, out_model, out_solution, out_text, out_json, out_dir;
    std::string mode = "sampled";
    std::string item_min_file;
    std::uint32_t minsup = 30;
    std::uint64_t seed = 0;
    std::uint32_t item_max = 0;
    std::uint32_t item_min_default = 1;
    std::uint64_t node_budget = 10000000;
    std::size_t max_size = 0;
    int threads = 1;

    auto* generate = app.add_subcommand("generate", "Generate a synthetic catalog and baskets");
    generate->add_option("--config", config_path, "Generator config (JSON)")->required();
    generate->add_option("--seed", seed, "Generator seed (default 0)");
    generate->add_option("--out-catalog", out_catalog, "Catalog CSV to write")->required();
    generate->add_option("--out-baskets", out_baskets, "Basket CSV to write")->required();

    auto* mine = app.add_subcommand("mine", "Mine frequent itemsets");
    mine->add_option("--catalog", catalog_path, "Catalog CSV")->required();
    mine->add_option("--baskets", baskets_path, "Basket CSV")->required();
    mine->add_option("--minsup", minsup, "Absolute support threshold (default 30)");
    mine->add_option("--max-size", max_size, "Largest itemset size to mine, 0 = unbounded");
    mine->add_option("--threads", threads, "Worker threads, 0 = hardware (affects speed only)");
    mine->add_option("--out", out_path, "Frequent set dump to write (JSONL)")->required();

    auto* allocate = app.add_subcommand("allocate", "Allocate transaction margins to frequent sets");
    allocate->add_option("--catalog", catalog_path, "Catalog CSV")->required();
    allocate->add_option("--baskets", baskets_path, "Basket CSV")->required();
    allocate->add_option("--frequent", frequent_path, "Frequent set dump (JSONL)")->required();
    allocate->add_option("--seed", seed, "Allocation seed (default 0)");
    allocate->add_option("--mode", mode, "sampled or expected (default sampled)")
        ->check(CLI::IsMember({"sampled", "expected"}));
    allocate->add_option("--threads", threads, "Worker threads, 0 = hardware (affects speed only)");
    allocate->add_option("--out", out_path, "Allocation dump to write (JSONL)")->required();

    auto* optimize = app.add_subcommand("optimize", "Solve the product selection program");
    optimize->add_option("--catalog", catalog_path, "Catalog CSV")->required();
    optimize->add_option("--alloc", alloc_path, "Allocation dump (JSONL)")->required();
    optimize->add_option("--item-max", item_max,
                         "Total products to select, 0 = one per category (default 0)");
    optimize->add_option("--item-min-default", item_min_default,
                         "Per-category minimum when not overridden (default 1)");
    optimize->add_option("--item-min-file", item_min_file,
                         "CSV overrides: category_id,item_min[,item_cap]");
    optimize->add_option("--node-budget", node_budget,
                         "Branch-and-bound node budget (default 10000000)");
    optimize->add_option("--out-model", out_model, "Model JSON to write")->required();
    optimize->add_option("--out", out_solution, "Solution JSON to write")->required();

    auto* report = app.add_subcommand("report", "Render the improvement and breakdown tables");
    report->add_option("--catalog", catalog_path, "Catalog CSV")->required();
    report->add_option("--frequent", frequent_path, "Frequent set dump (JSONL)")->required();
    report->add_option("--alloc", alloc_path, "Allocation dump (JSONL)")->required();
    report->add_option("--model", model_path, "Model JSON")->required();
    report->add_option("--solution", solution_path, "Solution JSON")->required();
    report->add_option("--out-text", out_text, "Text report to write (default: stdout)");
    report->add_option("--out-json", out_json, "JSON report to write");

    auto* run = app.add_subcommand("run", "mine + allocate + optimize + report in one go");
    run->add_option("--catalog", catalog_path, "Catalog CSV")->required();
    run->add_option("--baskets", baskets_path, "Basket CSV")->required();
    run->add_option("--minsup", minsup, "Absolute support threshold (default 30)");
    run->add_option("--seed", seed, "Allocation seed (default 0)");
    run->add_option("--mode", mode, "sampled or expected (default sampled)")
        ->check(CLI::IsMember({"sampled", "expected"}));
    run->add_option("--item-max", item_max,
                    "Total products to select, 0 = one per category (default 0)");
    run->add_option("--item-min-default", item_min_default,
                    "Per-category minimum when not overridden (default 1)");
    run->add_option("--item-min-file", item_min_file,
                    "CSV overrides: category_id,item_min[,item_cap]");
    run->add_option("--node-budget", node_budget,
                    "Branch-and-bound node budget (default 10000000)");
    run->add_option("--threads", threads, "Worker threads, 0 = hardware (affects speed only)");
    run->add_option("--out-dir", out_dir, "Directory for all artifacts")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*generate) {
            stage_generate(config_path, seed, out_catalog, out_baskets);
        } else if (*mine) {
            stage_mine(catalog_path, baskets_path, minsup, max_size, threads, out_path);
        } else if (*allocate) {
            stage_allocate(catalog_path, baskets_path, frequent_path, seed, mode, threads,
                           out_path);
        } else if (*optimize) {
            stage_optimize(catalog_path, alloc_path, item_max, item_min_default, item_min_file,
                           node_budget, out_model, out_solution);
        } else if (*report) {
            stage_report(catalog_path, frequent_path, alloc_path, model_path, solution_path,
                         out_text, out_json);
        } else if (*run) {
            std::filesystem::create_directories(out_dir);
            auto in_dir = [&](const char* name) {
                return (std::filesystem::path(out_dir) / name).string();
            };
            stage_mine(catalog_path, baskets_path, minsup, max_size, threads,
                       in_dir("frequent_sets.jsonl"));
            stage_allocate(catalog_path, baskets_path, in_dir("frequent_sets.jsonl"), seed, mode,
                           threads, in_dir("allocation.jsonl"));
            stage_optimize(catalog_path, in_dir("allocation.jsonl"), item_max, item_min_default,
                           item_min_file, node_budget, in_dir("model.json"),
                           in_dir("solution.json"));
            stage_report(catalog_path, in_dir("frequent_sets.jsonl"), in_dir("allocation.jsonl"),
                         in_dir("model.json"), in_dir("solution.json"), in_dir("report.txt"),
                         in_dir("report.json"));
        }
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
