#pragma once

#include <iosfwd>
#include <string>

#include "profset/allocate.hpp"
#include "profset/catalog.hpp"
#include "profset/miner.hpp"
#include "profset/model.hpp"
#include "profset/report.hpp"

namespace profset {

/// Machine artifacts for the file-based stage handoff. Everything is JSON
/// with product-id strings (not dense indices) so dumps stay meaningful when
/// read next to the source CSVs, and all money is integer minor units.
/// Writers are deterministic byte for byte for equal inputs; nothing
/// time- or thread-dependent is serialized.
///
/// Frequent sets and allocations are JSON Lines: one meta object, then one
/// object per entry in canonical order. Model, solution and report are
/// single indented JSON documents.

void dump_frequent_sets(std::ostream& out, const FrequentSetIndex& index,
                        const Catalog& catalog);
FrequentSetIndex load_frequent_sets(std::istream& in, const Catalog& catalog);

void dump_allocation(std::ostream& out, const AllocationResult& result, const Catalog& catalog);
AllocationResult load_allocation(std::istream& in, const Catalog& catalog);

void dump_model(std::ostream& out, const ProfsetModel& model);
ProfsetModel load_model(std::istream& in);

void dump_solution(std::ostream& out, const Solution& solution, const ProfsetModel& model);
Solution load_solution(std::istream& in, const ProfsetModel& model);

void dump_report(std::ostream& out, const Report& report);

/// File wrappers; DataError with the path on open failure.
void dump_frequent_sets_file(const std::string& path, const FrequentSetIndex& index,
                             const Catalog& catalog);
FrequentSetIndex load_frequent_sets_file(const std::string& path, const Catalog& catalog);
void dump_allocation_file(const std::string& path, const AllocationResult& result,
                          const Catalog& catalog);
AllocationResult load_allocation_file(const std::string& path, const Catalog& catalog);
void dump_model_file(const std::string& path, const ProfsetModel& model);
ProfsetModel load_model_file(const std::string& path);
void dump_solution_file(const std::string& path, const Solution& solution,
                        const ProfsetModel& model);
Solution load_solution_file(const std::string& path, const ProfsetModel& model);
void dump_report_file(const std::string& path, const Report& report);
void write_text_file(const std::string& path, const std::string& text);

} // namespace profset
