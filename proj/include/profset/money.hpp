#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace profset {

/// Monetary amount in integer minor currency units (e.g. cents).
/// All margin arithmetic in the pipeline is exact integer arithmetic;
/// nothing that sums margins ever touches floating point.
struct Money {
    std::int64_t minor_units = 0;

    constexpr Money() = default;
    constexpr explicit Money(std::int64_t units) : minor_units(units) {}

    constexpr auto operator<=>(const Money&) const = default;

    constexpr Money& operator+=(Money rhs) {
        minor_units += rhs.minor_units;
        return *this;
    }
    constexpr Money& operator-=(Money rhs) {
        minor_units -= rhs.minor_units;
        return *this;
    }

    friend constexpr Money operator+(Money a, Money b) { return Money{a.minor_units + b.minor_units}; }
    friend constexpr Money operator-(Money a, Money b) { return Money{a.minor_units - b.minor_units}; }
    friend constexpr Money operator-(Money a) { return Money{-a.minor_units}; }
    friend constexpr Money operator*(Money a, std::int64_t k) { return Money{a.minor_units * k}; }
    friend constexpr Money operator*(std::int64_t k, Money a) { return Money{a.minor_units * k}; }
};

inline std::string to_string(Money m) { return std::to_string(m.minor_units); }

} // namespace profset
