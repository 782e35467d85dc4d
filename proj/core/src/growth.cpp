#include "am2/growth.hpp"

#include <algorithm>

#include "scalar_solvers.hpp"

namespace am2 {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("growth parameter ") + name +
                                    " must be strictly positive");
    }
}

void require_nonnegative_conc(double s) {
    if (!(s >= 0.0)) {
        throw std::domain_error("concentration must be nonnegative");
    }
}

double removal_rate(double D, double r, double alpha, int tier) {
    if (!(D > 0.0)) throw std::invalid_argument("dilution rate D must be positive");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("volume fraction r must lie in (0,1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (tier != 1 && tier != 2) throw std::invalid_argument("tier must be 1 or 2");
    const double ri = (tier == 1) ? r : 1.0 - r;
    return alpha * D / ri;
}

}  // namespace

GrowthLaw GrowthLaw::monod(double m1, double K1) {
    require_positive(m1, "m1");
    require_positive(K1, "K1");
    GrowthLaw law;
    law.kind_ = GrowthKind::MonotoneBounded;
    law.form_ = Form::Monod;
    law.a_ = m1;
    law.b_ = K1;
    law.max_rate_ = m1;
    law.name_ = "monod";
    law.params_ = {{"m1", m1}, {"K1", K1}};
    return law;
}

GrowthLaw GrowthLaw::haldane(double m2, double K2, double KI) {
    require_positive(m2, "m2");
    require_positive(K2, "K2");
    require_positive(KI, "KI");
    GrowthLaw law;
    law.kind_ = GrowthKind::Unimodal;
    law.form_ = Form::Haldane;
    law.a_ = m2;
    law.b_ = K2;
    law.c_ = KI;
    law.peak_s_ = std::sqrt(K2 * KI);
    law.max_rate_ = m2 * law.peak_s_ / (K2 + law.peak_s_ + law.peak_s_ * law.peak_s_ / KI);
    law.name_ = "haldane";
    law.params_ = {{"m2", m2}, {"K2", K2}, {"KI", KI}};
    return law;
}

GrowthLaw GrowthLaw::custom_monotone(std::function<double(double)> mu,
                                     std::function<double(double)> dmu,
                                     double sup_rate) {
    require_positive(sup_rate, "sup_rate");
    if (!mu || !dmu) throw std::invalid_argument("custom law needs value and derivative");
    GrowthLaw law;
    law.kind_ = GrowthKind::MonotoneBounded;
    law.form_ = Form::Custom;
    law.max_rate_ = sup_rate;
    law.fval_ = std::move(mu);
    law.fder_ = std::move(dmu);
    return law;
}

GrowthLaw GrowthLaw::custom_unimodal(std::function<double(double)> mu,
                                     std::function<double(double)> dmu,
                                     double s_peak) {
    require_positive(s_peak, "s_peak");
    if (!mu || !dmu) throw std::invalid_argument("custom law needs value and derivative");
    GrowthLaw law;
    law.kind_ = GrowthKind::Unimodal;
    law.form_ = Form::Custom;
    law.peak_s_ = s_peak;
    law.max_rate_ = mu(s_peak);
    law.fval_ = std::move(mu);
    law.fder_ = std::move(dmu);
    return law;
}

double GrowthLaw::value(double s) const {
    require_nonnegative_conc(s);
    switch (form_) {
        case Form::Monod:
            return a_ * s / (b_ + s);
        case Form::Haldane:
            return a_ * s / (b_ + s + s * s / c_);
        case Form::Custom:
            return fval_(s);
    }
    return 0.0;
}

double GrowthLaw::derivative(double s) const {
    require_nonnegative_conc(s);
    switch (form_) {
        case Form::Monod: {
            const double den = b_ + s;
            return a_ * b_ / (den * den);
        }
        case Form::Haldane: {
            const double den = b_ + s + s * s / c_;
            return a_ * (b_ - s * s / c_) / (den * den);
        }
        case Form::Custom:
            return fder_(s);
    }
    return 0.0;
}

std::pair<double, double> GrowthLaw::peak() const {
    if (kind_ != GrowthKind::Unimodal) {
        throw WrongKindError("peak() requires a unimodal growth law");
    }
    return {peak_s_, value(peak_s_)};
}

BreakEven lambda1(const GrowthLaw& mu1, double D, double r, double alpha, int tier) {
    if (!mu1.is_monotone()) {
        throw WrongKindError("lambda1 requires a monotone bounded growth law");
    }
    BreakEven be;
    be.tier = tier;
    be.removal = removal_rate(D, r, alpha, tier);
    if (be.removal >= mu1.max_rate()) return be;  // supremum never attained

    if (mu1.form_ == GrowthLaw::Form::Monod) {
        // m1 s / (K1 + s) = c  =>  s = c K1 / (m1 - c)
        be.low = be.removal * mu1.b_ / (mu1.a_ - be.removal);
        return be;
    }

    // Bracket [0, hi] by doubling until mu exceeds the removal rate.
    double hi = 1.0;
    int guard = 0;
    while (mu1.value(hi) < be.removal) {
        hi *= 2.0;
        if (++guard > 200) {
            throw InternalError("lambda1: failed to bracket a monotone root");
        }
    }
    auto res = detail::bisect([&](double s) { return mu1.value(s) - be.removal; }, 0.0, hi);
    if (!res.bracketed) throw InternalError("lambda1: lost the bracket");
    res = detail::newton_polish([&](double s) { return mu1.value(s) - be.removal; },
                                [&](double s) { return mu1.derivative(s); }, res.x, 0.0, hi);
    be.low = res.x;
    return be;
}

BreakEven lambda2(const GrowthLaw& mu2, double D, double r, double alpha, int tier) {
    if (mu2.kind() != GrowthKind::Unimodal) {
        throw WrongKindError("lambda2 requires a unimodal growth law");
    }
    BreakEven be;
    be.tier = tier;
    be.removal = removal_rate(D, r, alpha, tier);
    const auto [s_peak, mu_peak] = mu2.peak();
    if (be.removal > mu_peak) return be;  // above the peak: no solution
    if (be.removal == mu_peak) {
        be.low = be.high = s_peak;
        be.tangent = true;
        return be;
    }

    if (mu2.form_ == GrowthLaw::Form::Haldane) {
        // m2 s = c (K2 + s + s^2/KI)  =>  s^2 + (c - m2) KI / c s + K2 KI = 0.
        // Roots multiply to K2*KI = s_peak^2, so the stable quadratic form
        // gives both without cancellation.
        const double c = be.removal;
        const double bq = (c - mu2.a_) * mu2.c_ / c;  // negative since c < m2
        const double disc = bq * bq - 4.0 * mu2.b_ * mu2.c_;
        if (disc <= 0.0) {  // numerically tangent
            be.low = be.high = s_peak;
            be.tangent = true;
            return be;
        }
        const double root_hi = 0.5 * (-bq + std::sqrt(disc));
        be.high = root_hi;
        be.low = mu2.b_ * mu2.c_ / root_hi;
        return be;
    }

    // Custom unimodal: one root on each side of the peak.
    auto g = [&](double s) { return mu2.value(s) - be.removal; };
    auto res_lo = detail::bisect(g, 0.0, s_peak);
    double hi = 2.0 * s_peak;
    int guard = 0;
    while (mu2.value(hi) > be.removal) {
        hi *= 2.0;
        if (hi > 1e6 * s_peak || ++guard > 200) {
            throw InternalError("lambda2: failed to bracket the upper root");
        }
    }
    auto res_hi = detail::bisect(g, s_peak, hi);
    if (!res_lo.bracketed || !res_hi.bracketed) {
        throw InternalError("lambda2: lost a bracket");
    }
    auto dg = [&](double s) { return mu2.derivative(s); };
    be.low = detail::newton_polish(g, dg, res_lo.x, 0.0, s_peak).x;
    be.high = detail::newton_polish(g, dg, res_hi.x, s_peak, hi).x;
    return be;
}

HypothesisReport validate_hypotheses(const GrowthLaw& law, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("validate_hypotheses: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw std::invalid_argument("validate_hypotheses: grid must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("validate_hypotheses: grid must be strictly increasing");
        }
    }

    HypothesisReport report;
    auto add = [&](double lo, double hi, std::string what) {
        report.violations.push_back({lo, hi, std::move(what)});
    };

    if (law.value(0.0) != 0.0) add(0.0, 0.0, "mu(0) != 0");

    int prev_sign = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double dv = law.value(grid[i + 1]) - law.value(grid[i]);
        const int sign = (dv > 0.0) ? 1 : (dv < 0.0 ? -1 : 0);
        if (sign == 0) add(grid[i], grid[i + 1], "flat segment");
        if (prev_sign != 0 && sign != 0 && sign != prev_sign) ++report.slope_sign_changes;
        if (sign != 0) prev_sign = sign;

        if (law.is_monotone() && sign < 0) add(grid[i], grid[i + 1], "monotone law decreasing");
    }

    if (law.is_monotone()) {
        for (double s : grid) {
            if (law.value(s) > law.max_rate() * (1.0 + 1e-12)) {
                add(s, s, "value above stated supremum");
            }
        }
    } else {
        if (report.slope_sign_changes != 1) {
            // A unimodal law sampled on a grid spanning the peak must flip
            // slope exactly once; grids entirely on one side flip zero times.
            const auto [s_peak, mu_peak] = law.peak();
            const bool spans_peak = grid.front() < s_peak && grid.back() > s_peak;
            if (spans_peak || report.slope_sign_changes > 1) {
                add(grid.front(), grid.back(), "unimodal law with " +
                        std::to_string(report.slope_sign_changes) + " slope sign changes");
            }
        }
        for (double s : grid) {
            if (law.value(s) > law.max_rate() * (1.0 + 1e-12)) {
                add(s, s, "value above peak");
            }
        }
    }
    return report;
}

}  // namespace am2
