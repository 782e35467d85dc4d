#include "am2/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "scalar_solvers.hpp"

namespace am2 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SystemState nan_state() {
    return SystemState(kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN);
}

// Classify a strict existence condition: boundary hits are marginal, not
// existing.
void apply_existence(Equilibrium& e, const Cond& c) {
    e.marginal = c.margin <= kExistenceMargin;
    e.exists = c.holds && !e.marginal;
    if (!e.exists) e.violated = e.marginal ? c.binding + " (marginal)" : c.binding;
}

Verdict verdict_from(const Cond& c, double eps) {
    if (c.margin <= eps) return Verdict::Marginal;
    return c.holds ? Verdict::LES : Verdict::Unstable;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::LES: return "LES";
        case Verdict::Unstable: return "unstable";
        case Verdict::Marginal: return "marginal";
    }
    return "?";
}

const char* to_string(UpperFamily f) noexcept {
    switch (f) {
        case UpperFamily::E00: return "E00";
        case UpperFamily::E10: return "E10";
        case UpperFamily::E01: return "E01";
        case UpperFamily::E02: return "E02";
        case UpperFamily::E11: return "E11";
        case UpperFamily::E12: return "E12";
    }
    return "?";
}

std::string FamilyLabel::str() const {
    std::string s = "E";
    s += static_cast<char>('0' + i);
    s += static_cast<char>('0' + j);
    s += '^';
    s += static_cast<char>('0' + k);
    s += static_cast<char>('0' + l);
    if (branch > 0) {
        s += '#';
        s += std::to_string(branch);
    }
    return s;
}

double AuxFunctions::f1(double x) const {
    return mu1->value(std::max(S1in - ak1 * x, 0.0));
}

double AuxFunctions::g1(double x) const {
    return alpha_D2 * (x - x11) / x;
}

double AuxFunctions::f2(double x) const {
    return mu2->value(std::max(sigma + ak3 * (x21 - x), 0.0));
}

double AuxFunctions::g2(double x) const {
    return alpha_D2 * (x - x21) / x;
}

double AuxFunctions::df1(double x) const {
    return -ak1 * mu1->derivative(std::max(S1in - ak1 * x, 0.0));
}

double AuxFunctions::dg1(double x) const {
    return alpha_D2 * x11 / (x * x);
}

double AuxFunctions::df2(double x) const {
    return -ak3 * mu2->derivative(std::max(sigma + ak3 * (x21 - x), 0.0));
}

double AuxFunctions::dg2(double x) const {
    return alpha_D2 * x21 / (x * x);
}

AuxFunctions make_aux(const ModelParams& p, double x11_star, double s21_star,
                      double x21_star, double x12_star) {
    AuxFunctions a;
    a.x11 = x11_star;
    a.x21 = x21_star;
    a.ak1 = p.alpha * p.k1;
    a.ak2 = p.alpha * p.k2;
    a.ak3 = p.alpha * p.k3;
    a.alpha_D2 = p.alpha * p.D2();
    a.S1in = p.S1in;
    a.sigma = s21_star - a.ak2 * (x11_star - x12_star);
    a.d = x21_star + a.sigma / a.ak3;
    const double s2m = p.mu2.peak().first;
    a.x2m = x21_star + (a.sigma - s2m) / a.ak3;
    a.mu1 = &p.mu1;
    a.mu2 = &p.mu2;
    return a;
}

double aux_F(const ModelParams& p, int tier, int j) {
    if (tier != 1 && tier != 2) throw std::invalid_argument("aux_F: tier must be 1 or 2");
    if (j != 1 && j != 2) throw std::invalid_argument("aux_F: branch must be 1 or 2");
    const BreakEven l1 = lambda1(p.mu1, p.D, p.r, p.alpha, tier);
    const BreakEven l2 = lambda2(p.mu2, p.D, p.r, p.alpha, tier);
    const double lam2 = (j == 1) ? l2.low : l2.high;
    if (!l1.finite() || !std::isfinite(lam2)) return kInfinite;
    return l1.low + (p.k1 / p.k2) * (lam2 - p.S2in);
}

double aux_phi(const ModelParams& p, int j, double x12_star) {
    if (j != 1 && j != 2) throw std::invalid_argument("aux_phi: branch must be 1 or 2");
    const BreakEven l2 = lambda2(p.mu2, p.D, p.r, p.alpha, 2);
    const double lam2 = (j == 1) ? l2.low : l2.high;
    if (!std::isfinite(lam2)) return -kInfinite;
    return p.S2in + p.alpha * p.k2 * x12_star - lam2;
}

double solve_x12(const ModelParams& p, const UpperEquilibrium& upper) {
    const double hi = p.S1in / (p.alpha * p.k1);
    if (!(upper.x11 >= 0.0) || !(upper.x11 < hi)) {
        throw std::invalid_argument("solve_x12: upper X1 must lie below S1in/(alpha k1)");
    }
    const AuxFunctions a = make_aux(p, upper.x11, upper.s21, upper.x21, 0.0);
    auto F = [&](double x) { return a.f1(x) - a.g1(x); };
    auto res = detail::bisect(F, upper.x11, hi);
    if (!res.bracketed) {
        throw InternalError("solve_x12: f1 - g1 does not change sign over the bracket");
    }
    auto dF = [&](double x) { return a.df1(x) - a.dg1(x); };
    return detail::newton_polish(F, dF, res.x, upper.x11, hi).x;
}

X22Roots solve_x22_all(const ModelParams& p, const UpperEquilibrium& upper, double x12_star) {
    if (x12_star < upper.x11) {
        throw std::invalid_argument("solve_x22_all: requires X1^{2*} >= X1^{1*}");
    }
    const AuxFunctions a = make_aux(p, upper.x11, upper.s21, upper.x21, x12_star);
    X22Roots out;
    out.x2m = a.x2m;
    out.d = a.d;
    const double lo = upper.x21;
    if (!(lo > 0.0) || !(a.d > lo)) return out;

    auto F = [&](double x) { return a.f2(x) - a.g2(x); };
    auto dF = [&](double x) { return a.df2(x) - a.dg2(x); };
    auto refine = [&](double xa, double xb) {
        auto res = detail::bisect(F, xa, xb);
        if (res.bracketed) {
            out.roots.push_back(detail::newton_polish(F, dF, res.x, lo, a.d).x);
        }
    };

    if (a.x2m <= lo) {
        // f2 decreasing and g2 increasing over the whole interval.
        refine(lo, a.d);
    } else {
        // Rising segment: fixed-resolution sign scan, one bisection per bracket.
        const double seg_hi = std::min(a.x2m, a.d);
        constexpr int kScanPoints = 4096;
        const double h = (seg_hi - lo) / kScanPoints;
        double xa = lo;
        double fa = F(xa);
        for (int i = 1; i <= kScanPoints; ++i) {
            const double xb = (i == kScanPoints) ? seg_hi : lo + i * h;
            const double fb = F(xb);
            if (fb == 0.0) {
                out.roots.push_back(xb);
            } else if ((fa > 0.0) != (fb > 0.0)) {
                refine(xa, xb);
            }
            xa = xb;
            fa = fb;
        }
        // Falling segment: f2 - g2 strictly decreasing, at most one root.
        if (a.x2m < a.d && F(a.x2m) > 0.0) {
            refine(a.x2m, a.d);
        }
    }

    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                                [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }),
                    out.roots.end());
    for (std::size_t i = 0; i + 1 < out.roots.size(); ++i) {
        if (out.roots[i + 1] - out.roots[i] < 1e-8) out.tangency = true;
    }
    if (!out.roots.empty() && out.roots.size() % 2 == 0) out.tangency = true;  // non-generic count
    return out;
}

std::array<UpperEquilibrium, 6> upper_equilibria(const ModelParams& p) {
    const BreakEven l1 = lambda1(p.mu1, p.D, p.r, p.alpha, 1);
    const BreakEven l2 = lambda2(p.mu2, p.D, p.r, p.alpha, 1);
    const double ak1 = p.alpha * p.k1;
    const double ak3 = p.alpha * p.k3;

    std::array<UpperEquilibrium, 6> out;
    auto apply = [&](UpperEquilibrium& u, const Cond& exist) {
        u.marginal = exist.margin <= kExistenceMargin;
        u.exists = exist.holds && !u.marginal;
        if (!u.exists) {
            u.violated = u.marginal ? exist.binding + " (marginal)" : exist.binding;
            u.s11 = u.x11 = u.s21 = u.x21 = kNaN;
        }
    };
    auto stab = [&](UpperEquilibrium& u, const Cond& c) {
        u.stability = verdict_from(c, kStabilityMargin);
        u.stability_margin = c.margin;
    };

    {  // E00: total washout
        auto& u = out[0];
        u.family = UpperFamily::E00;
        u.s11 = p.S1in;
        u.x11 = 0.0;
        u.s21 = p.S2in;
        u.x21 = 0.0;
        apply(u, cond_true());
        stab(u, cond_and(cond_lt(p.S1in, l1.low, "S1in < lambda1^1"),
                         cond_outside(p.S2in, l2.low, l2.high, "S2in outside [lambda2^11, lambda2^12]")));
    }
    {  // E10: biomass 1 only
        auto& u = out[1];
        u.family = UpperFamily::E10;
        u.s11 = l1.low;
        u.x11 = (p.S1in - l1.low) / ak1;
        u.s21 = p.S2in + (p.k2 / p.k1) * (p.S1in - l1.low);
        u.x21 = 0.0;
        apply(u, cond_gt(p.S1in, l1.low, "S1in > lambda1^1"));
        stab(u, cond_outside(u.s21, l2.low, l2.high,
                             "S2in + k2/k1 (S1in - lambda1^1) outside [lambda2^11, lambda2^12]"));
    }
    for (int i = 1; i <= 2; ++i) {  // E0i: biomass 2 only
        auto& u = out[1 + i];
        u.family = (i == 1) ? UpperFamily::E01 : UpperFamily::E02;
        const double lam = (i == 1) ? l2.low : l2.high;
        u.s11 = p.S1in;
        u.x11 = 0.0;
        u.s21 = lam;
        u.x21 = (p.S2in - lam) / ak3;
        apply(u, cond_gt(p.S2in, lam, i == 1 ? "S2in > lambda2^11" : "S2in > lambda2^12"));
        if (i == 1) {
            stab(u, cond_lt(p.S1in, l1.low, "S1in < lambda1^1"));
        } else {
            u.stability = Verdict::Unstable;
            u.stability_margin = kInfinite;
        }
    }
    for (int i = 1; i <= 2; ++i) {  // E1i: coexistence
        auto& u = out[3 + i];
        u.family = (i == 1) ? UpperFamily::E11 : UpperFamily::E12;
        const double lam = (i == 1) ? l2.low : l2.high;
        const double F = aux_F(p, 1, i);
        u.s11 = l1.low;
        u.x11 = (p.S1in - l1.low) / ak1;
        u.s21 = lam;
        u.x21 = p.k2 * (p.S1in - F) / (ak1 * p.k3);
        apply(u, cond_and(cond_gt(p.S1in, l1.low, "S1in > lambda1^1"),
                          cond_gt(p.S1in, F, i == 1 ? "S1in > F11" : "S1in > F12")));
        if (i == 1) {
            u.stability = u.exists ? Verdict::LES : Verdict::Unstable;
            u.stability_margin = kInfinite;
        } else {
            u.stability = Verdict::Unstable;
            u.stability_margin = kInfinite;
        }
    }
    return out;
}

std::vector<Equilibrium> enumerate_all(const ModelParams& p) {
    const auto uppers = upper_equilibria(p);
    const UpperEquilibrium& uE10 = uppers[1];

    const BreakEven l1_2 = lambda1(p.mu1, p.D, p.r, p.alpha, 2);
    const BreakEven l2_2 = lambda2(p.mu2, p.D, p.r, p.alpha, 2);
    const double ak1 = p.alpha * p.k1;
    const double ak2 = p.alpha * p.k2;
    const double ak3 = p.alpha * p.k3;

    std::vector<Equilibrium> out;
    out.reserve(16);

    auto push_absent = [&](FamilyLabel label, const Cond& c) {
        Equilibrium e;
        e.label = label;
        e.state = nan_state();
        apply_existence(e, c);
        out.push_back(std::move(e));
    };

    {  // E00^00: full washout
        Equilibrium e;
        e.label = {0, 0, 0, 0, 0};
        e.state = SystemState(p.S1in, 0, p.S2in, 0, p.S1in, 0, p.S2in, 0);
        apply_existence(e, cond_true());
        out.push_back(std::move(e));
    }
    for (int li = 1; li <= 2; ++li) {  // E00^{0i}
        const double lam = (li == 1) ? l2_2.low : l2_2.high;
        const Cond c = cond_gt(p.S2in, lam, li == 1 ? "S2in > lambda2^21" : "S2in > lambda2^22");
        Equilibrium e;
        e.label = {0, 0, 0, li, 0};
        apply_existence(e, c);
        if (e.exists) {
            e.state = SystemState(p.S1in, 0, p.S2in, 0, p.S1in, 0, lam, (p.S2in - lam) / ak3);
        } else {
            e.state = nan_state();
        }
        out.push_back(std::move(e));
    }
    {  // E00^10
        const Cond c = cond_gt(p.S1in, l1_2.low, "S1in > lambda1^2");
        Equilibrium e;
        e.label = {0, 0, 1, 0, 0};
        apply_existence(e, c);
        if (e.exists) {
            const double x12 = (p.S1in - l1_2.low) / ak1;
            const double s22 = p.S2in + (p.k2 / p.k1) * (p.S1in - l1_2.low);
            e.state = SystemState(p.S1in, 0, p.S2in, 0, l1_2.low, x12, s22, 0);
            e.x12_star = x12;
        } else {
            e.state = nan_state();
        }
        out.push_back(std::move(e));
    }
    for (int li = 1; li <= 2; ++li) {  // E00^{1i}
        const double lam = (li == 1) ? l2_2.low : l2_2.high;
        const double F = aux_F(p, 2, li);
        const Cond c = cond_and(cond_gt(p.S1in, l1_2.low, "S1in > lambda1^2"),
                                cond_gt(p.S1in, F, li == 1 ? "S1in > F21" : "S1in > F22"));
        Equilibrium e;
        e.label = {0, 0, 1, li, 0};
        e.F = F;
        apply_existence(e, c);
        if (e.exists) {
            const double x12 = (p.S1in - l1_2.low) / ak1;
            const double x22 = p.k2 * (p.S1in - F) / (ak1 * p.k3);
            e.state = SystemState(p.S1in, 0, p.S2in, 0, l1_2.low, x12, lam, x22);
            e.x12_star = x12;
            e.x22_star = x22;
        } else {
            e.state = nan_state();
        }
        out.push_back(std::move(e));
    }

    // E10^{1l}: reactor 1 carries biomass 1; X1^2 from the f1 = g1 root.
    {
        double x12 = kNaN, phi1 = kNaN, phi2 = kNaN;
        const Cond gate = cond_gt(p.S1in, lambda1(p.mu1, p.D, p.r, p.alpha, 1).low, "S1in > lambda1^1");
        const bool upper_ok = uE10.exists;
        if (upper_ok) {
            x12 = solve_x12(p, uE10);
            phi1 = aux_phi(p, 1, x12);
            phi2 = aux_phi(p, 2, x12);
        }
        {  // E10^10
            Equilibrium e;
            e.label = {1, 0, 1, 0, 0};
            apply_existence(e, gate);
            e.x12_star = x12;
            e.phi1 = phi1;
            e.phi2 = phi2;
            if (e.exists) {
                e.state = SystemState(uE10.s11, uE10.x11, uE10.s21, uE10.x21,
                                      p.S1in - ak1 * x12, x12, p.S2in + ak2 * x12, 0);
            } else {
                e.state = nan_state();
            }
            out.push_back(std::move(e));
        }
        for (int li = 1; li <= 2; ++li) {  // E10^{1i}
            const double lam = (li == 1) ? l2_2.low : l2_2.high;
            const double phi = (li == 1) ? phi1 : phi2;
            Cond c = gate;
            if (upper_ok) {
                c = cond_and(c, cond_gt(phi, 0.0, li == 1 ? "phi1 > 0" : "phi2 > 0"));
            }
            Equilibrium e;
            e.label = {1, 0, 1, li, 0};
            e.x12_star = x12;
            e.phi1 = phi1;
            e.phi2 = phi2;
            apply_existence(e, c);
            if (e.exists) {
                const double x22 = phi / ak3;
                e.state = SystemState(uE10.s11, uE10.x11, uE10.s21, uE10.x21,
                                      p.S1in - ak1 * x12, x12, lam, x22);
                e.x22_star = x22;
            } else {
                e.state = nan_state();
            }
            out.push_back(std::move(e));
        }
    }

    // Coexistence-in-reactor-2 families: branch-indexed roots of f2 = g2.
    auto push_star_family = [&](FamilyLabel base, const UpperEquilibrium& upper, const Cond& gate,
                                double x12, double s12, auto lower_s22) {
        if (!gate.holds || gate.margin <= kExistenceMargin) {
            push_absent(base, gate);
            return;
        }
        const X22Roots rr = solve_x22_all(p, upper, x12);
        if (rr.roots.empty()) {
            Equilibrium e;
            e.label = base;
            e.state = nan_state();
            e.exists = false;
            e.violated = "no f2 = g2 root located";
            e.x2m = rr.x2m;
            e.d = rr.d;
            out.push_back(std::move(e));
            return;
        }
        const int k = static_cast<int>(rr.roots.size());
        for (int b = 1; b <= k; ++b) {
            const double x22 = rr.roots[static_cast<std::size_t>(b - 1)];
            Equilibrium e;
            e.label = base;
            e.label.branch = b;
            e.exists = true;
            e.state = SystemState(upper.s11, upper.x11, upper.s21, upper.x21,
                                  s12, x12, lower_s22(x22), x22);
            e.x12_star = x12;
            e.x22_star = x22;
            e.x2m = rr.x2m;
            e.d = rr.d;
            e.root_count = k;
            e.tangency = rr.tangency;
            e.marginal = rr.tangency;
            out.push_back(std::move(e));
        }
    };

    for (int ui = 1; ui <= 2; ++ui) {  // E0i^{01} and E0i^{11}
        const UpperEquilibrium& upper = uppers[1 + ui];
        const Cond upper_gate = cond_gt(p.S2in,
                                        (ui == 1) ? lambda2(p.mu2, p.D, p.r, p.alpha, 1).low
                                                  : lambda2(p.mu2, p.D, p.r, p.alpha, 1).high,
                                        ui == 1 ? "S2in > lambda2^11" : "S2in > lambda2^12");
        // E0i^{01}: reactor 2 without biomass 1
        push_star_family({0, ui, 0, 1, 0}, upper, upper_gate, 0.0, p.S1in,
                         [&](double x22) { return p.S2in - ak3 * x22; });
        // E0i^{11}: biomass 1 grows in reactor 2 at its own break-even
        const Cond gate11 = cond_and(upper_gate, cond_gt(p.S1in, l1_2.low, "S1in > lambda1^2"));
        const double x12 = (gate11.holds && l1_2.finite()) ? (p.S1in - l1_2.low) / ak1 : kNaN;
        push_star_family({0, ui, 1, 1, 0}, upper, gate11, std::isnan(x12) ? 0.0 : x12, l1_2.low,
                         [&](double x22) {
                             return (p.k2 / p.k1) * (p.S1in - l1_2.low) + p.S2in - ak3 * x22;
                         });
    }
    for (int ui = 1; ui <= 2; ++ui) {  // E1i^{11}
        const UpperEquilibrium& upper = uppers[3 + ui];
        const double F = aux_F(p, 1, ui);
        const Cond gate = cond_and(cond_gt(p.S1in, lambda1(p.mu1, p.D, p.r, p.alpha, 1).low, "S1in > lambda1^1"),
                                   cond_gt(p.S1in, F, ui == 1 ? "S1in > F11" : "S1in > F12"));
        double x12 = kNaN;
        if (gate.holds && gate.margin > kExistenceMargin && upper.exists) {
            x12 = solve_x12(p, upper);
        }
        FamilyLabel base{1, ui, 1, 1, 0};
        const std::size_t first = out.size();
        if (std::isnan(x12)) {
            push_absent(base, gate);
        } else {
            push_star_family(base, upper, gate, x12, p.S1in - ak1 * x12,
                             [&](double x22) { return p.S2in + ak2 * x12 - ak3 * x22; });
        }
        for (std::size_t idx = first; idx < out.size(); ++idx) out[idx].F = F;
    }

    return out;
}

double residual(const ModelParams& p, const Equilibrium& e) {
    if (!e.exists) throw std::invalid_argument("residual: equilibrium does not exist");
    const Vec8 f = rhs(p, e.state);
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace am2
