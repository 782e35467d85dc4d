#pragma once

// Internal bracketed scalar solvers. Not installed; the public modules wrap
// these behind their own contracts.

#include <cmath>
#include <limits>
#include <utility>

namespace am2::detail {

struct RootResult {
    double x = std::numeric_limits<double>::quiet_NaN();
    double fx = std::numeric_limits<double>::quiet_NaN();
    bool bracketed = false;
};

// Bisection on [a,b] down to machine bracket width, keeping the iterate with
// the smallest |f|. Requires f(a) and f(b) of opposite sign (or zero).
template <class F>
RootResult bisect(F&& f, double a, double b) {
    RootResult out;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, 0.0, true};
    if (fb == 0.0) return {b, 0.0, true};
    if ((fa > 0.0) == (fb > 0.0)) return out;  // no sign change
    out.bracketed = true;
    out.x = a;
    out.fx = fa;
    if (std::abs(fb) < std::abs(fa)) {
        out.x = b;
        out.fx = fb;
    }
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;  // bracket at machine resolution
        const double fm = f(m);
        if (std::abs(fm) < std::abs(out.fx)) {
            out.x = m;
            out.fx = fm;
        }
        if (fm == 0.0) break;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return out;
}

// A few Newton steps to polish a bracketed root; never leaves [lo,hi] and
// never makes the residual worse.
template <class F, class DF>
RootResult newton_polish(F&& f, DF&& df, double x0, double lo, double hi) {
    double x = x0;
    double fx = f(x);
    for (int it = 0; it < 10; ++it) {
        const double d = df(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        double xn = x - fx / d;
        if (!(xn > lo && xn < hi)) break;
        const double fn = f(xn);
        if (!(std::abs(fn) < std::abs(fx))) break;
        x = xn;
        fx = fn;
        if (fx == 0.0) break;
    }
    return {x, fx, true};
}

// Golden-section maximization of a unimodal function on [a,b].
template <class F>
double golden_max(F&& f, double a, double b, double xtol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace am2::detail
