#pragma once

#include <stdexcept>
#include <string>

namespace profset {

/// Malformed or inconsistent input data (CSV parse errors, referential
/// integrity violations, bad configuration values).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Constraint configuration that admits no feasible selection. The message
/// names the violated inequality.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured search/state budget was exhausted before completion.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace profset
