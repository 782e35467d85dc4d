#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace am2 {

/// Outcome of a strict-inequality condition together with the distance to
/// its decision boundary. Margins survive and/or composition so callers can
/// tell a robust verdict from one that sits on a boundary.
struct Cond {
    bool holds = true;
    double margin = std::numeric_limits<double>::infinity();
    std::string binding;  // the comparison that decides the outcome

    explicit operator bool() const noexcept { return holds; }
};

inline Cond cond_true() { return {}; }

inline Cond cond_gt(double lhs, double rhs, std::string name) {
    // lhs > rhs; an infinite rhs can never be exceeded.
    if (std::isinf(rhs) && rhs > 0.0) return {false, std::numeric_limits<double>::infinity(), std::move(name)};
    if (std::isinf(rhs) && rhs < 0.0) return {true, std::numeric_limits<double>::infinity(), std::move(name)};
    return {lhs > rhs, std::abs(lhs - rhs), std::move(name)};
}

inline Cond cond_lt(double lhs, double rhs, std::string name) {
    if (std::isinf(rhs) && rhs > 0.0) return {true, std::numeric_limits<double>::infinity(), std::move(name)};
    if (std::isinf(rhs) && rhs < 0.0) return {false, std::numeric_limits<double>::infinity(), std::move(name)};
    return {lhs < rhs, std::abs(lhs - rhs), std::move(name)};
}

/// v outside the closed interval [lo, hi]; an infinite interval is empty.
inline Cond cond_outside(double v, double lo, double hi, std::string name) {
    if (!std::isfinite(lo)) return {true, std::numeric_limits<double>::infinity(), std::move(name)};
    const bool outside = v < lo || v > hi;
    const double margin = std::min(std::abs(v - lo), std::abs(v - hi));
    return {outside, margin, std::move(name)};
}

inline Cond cond_and(Cond a, Cond b) {
    Cond out;
    out.holds = a.holds && b.holds;
    if (out.holds) {
        out.margin = std::min(a.margin, b.margin);
        out.binding = (a.margin <= b.margin) ? a.binding : b.binding;
    } else {
        // Flipping a failed conjunction means flipping every failed term.
        if (!a.holds && !b.holds) {
            out.margin = std::max(a.margin, b.margin);
            out.binding = (a.margin <= b.margin) ? a.binding : b.binding;
        } else if (!a.holds) {
            out.margin = a.margin;
            out.binding = a.binding;
        } else {
            out.margin = b.margin;
            out.binding = b.binding;
        }
    }
    return out;
}

inline Cond cond_or(Cond a, Cond b) {
    Cond out;
    out.holds = a.holds || b.holds;
    if (out.holds) {
        // Leaving a union means leaving every satisfied term.
        if (a.holds && b.holds) {
            out.margin = std::max(a.margin, b.margin);
            out.binding = (a.margin >= b.margin) ? a.binding : b.binding;
        } else if (a.holds) {
            out.margin = a.margin;
            out.binding = a.binding;
        } else {
            out.margin = b.margin;
            out.binding = b.binding;
        }
    } else {
        out.margin = std::min(a.margin, b.margin);
        out.binding = (a.margin <= b.margin) ? a.binding : b.binding;
    }
    return out;
}

}  // namespace am2
