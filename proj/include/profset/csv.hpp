#pragma once

#include <iosfwd>
#include <string>

#include "profset/catalog.hpp"
#include "profset/transaction.hpp"

namespace profset {

struct ConstraintConfig;

// Catalog CSV:  product_id,name,category_id,category_name,unit_margin,cost
// Basket CSV:   transaction_id,product_id,quantity
// Money columns are integers in minor units. Lines starting with '#' are
// ignored. Fields may not contain commas; input is UTF-8.

/// Parses a catalog CSV. Errors carry the 1-based line number.
Catalog load_catalog(std::istream& source);
Catalog load_catalog_file(const std::string& path);

/// Parses a basket CSV against a loaded catalog. Rows sharing a transaction
/// id are grouped into one transaction (repeated products sum quantities);
/// transactions keep first-appearance order.
TransactionDb load_transactions(std::istream& source, const Catalog& catalog);
TransactionDb load_transactions_file(const std::string& path, const Catalog& catalog);

/// Per-category constraint overrides for the optimizer. Header is either
/// `category_id,item_min` or `category_id,item_min,item_cap`; each row sets
/// the minimum (and optionally the cap) for one category. Referential
/// checks against the catalog happen later in build_model.
void load_constraint_overrides(std::istream& source, ConstraintConfig& cfg);
void load_constraint_overrides_file(const std::string& path, ConstraintConfig& cfg);

void write_catalog_csv(std::ostream& out, const Catalog& catalog);
void write_baskets_csv(std::ostream& out, const TransactionDb& db, const Catalog& catalog);

void write_catalog_file(const std::string& path, const Catalog& catalog);
void write_baskets_file(const std::string& path, const TransactionDb& db, const Catalog& catalog);

} // namespace profset
