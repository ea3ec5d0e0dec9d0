#pragma once

#include <cstdint>
#include <string>

#include "circuitflow/errors.hpp"

namespace circuitflow {

// Formal degree of a gate or polynomial. The zero polynomial has degree
// minus infinity, kept as an explicit variant: it absorbs under +, is the
// minimum under max, and never silently collides with a real degree.
class GateDegree {
public:
    constexpr GateDegree() : finite_(false), value_(0) {}
    constexpr explicit GateDegree(std::int64_t v) : finite_(true), value_(v) {}

    static constexpr GateDegree neg_infinity() { return GateDegree(); }

    constexpr bool is_neg_infinity() const { return !finite_; }
    constexpr bool is_finite() const { return finite_; }

    // Numeric value; only meaningful for finite degrees.
    std::int64_t value() const {
        if (!finite_) throw ContractError("degree: value() of -inf");
        return value_;
    }

    // Value with -inf collapsed to fallback (handy for size formulas).
    constexpr std::int64_t value_or(std::int64_t fallback) const {
        return finite_ ? value_ : fallback;
    }

    friend constexpr GateDegree operator+(GateDegree a, GateDegree b) {
        if (!a.finite_ || !b.finite_) return neg_infinity();
        return GateDegree(a.value_ + b.value_);
    }

    friend constexpr bool operator==(GateDegree a, GateDegree b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }
    friend constexpr bool operator!=(GateDegree a, GateDegree b) { return !(a == b); }

    // -inf is below every finite degree.
    friend constexpr bool operator<(GateDegree a, GateDegree b) {
        if (!a.finite_) return b.finite_;
        if (!b.finite_) return false;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator<=(GateDegree a, GateDegree b) { return a < b || a == b; }
    friend constexpr bool operator>(GateDegree a, GateDegree b) { return b < a; }
    friend constexpr bool operator>=(GateDegree a, GateDegree b) { return b <= a; }

    friend constexpr GateDegree max(GateDegree a, GateDegree b) { return a < b ? b : a; }

    std::string to_string() const {
        return finite_ ? std::to_string(value_) : std::string("-inf");
    }

private:
    bool finite_;
    std::int64_t value_;
};

} // namespace circuitflow
