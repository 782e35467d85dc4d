#include "am2/stability.hpp"

#include <algorithm>
#include <cmath>

namespace am2 {

namespace {

Verdict verdict_from(const Cond& c, double eps) {
    if (c.margin <= eps) return Verdict::Marginal;
    return c.holds ? Verdict::LES : Verdict::Unstable;
}

struct TableResult {
    Verdict verdict;
    double margin;
};

// Closed-form stability row for one family, evaluated at the equilibrium.
// Families on an upper break-even branch (j = 2 or l = 2) are unstable
// whenever they exist.
TableResult table_verdict(const ModelParams& p, const Equilibrium& e) {
    if (e.label.unstable_branch()) {
        return {Verdict::Unstable, kInfinite};
    }
    const BreakEven l1_1 = lambda1(p.mu1, p.D, p.r, p.alpha, 1);
    const BreakEven l1_2 = lambda1(p.mu1, p.D, p.r, p.alpha, 2);
    const BreakEven l2_1 = lambda2(p.mu2, p.D, p.r, p.alpha, 1);
    const BreakEven l2_2 = lambda2(p.mu2, p.D, p.r, p.alpha, 2);

    const auto [i, j, k, l, branch] = e.label;
    Cond c = cond_true();
    if (i == 0 && j == 0 && k == 0 && l == 0) {
        c = cond_and(cond_and(cond_lt(p.S1in, l1_1.low, "S1in < lambda1^1"),
                              cond_lt(p.S1in, l1_2.low, "S1in < lambda1^2")),
                     cond_and(cond_outside(p.S2in, l2_1.low, l2_1.high, "S2in outside I1"),
                              cond_outside(p.S2in, l2_2.low, l2_2.high, "S2in outside I2")));
    } else if (i == 0 && j == 0 && k == 0 && l == 1) {
        c = cond_and(cond_and(cond_lt(p.S1in, l1_1.low, "S1in < lambda1^1"),
                              cond_lt(p.S1in, l1_2.low, "S1in < lambda1^2")),
                     cond_outside(p.S2in, l2_1.low, l2_1.high, "S2in outside I1"));
    } else if (i == 0 && j == 0 && k == 1 && l == 0) {
        const double s2p = p.S2in + (p.k2 / p.k1) * (p.S1in - l1_2.low);
        c = cond_and(cond_and(cond_lt(p.S1in, l1_1.low, "S1in < lambda1^1"),
                              cond_outside(p.S2in, l2_1.low, l2_1.high, "S2in outside I1")),
                     cond_outside(s2p, l2_2.low, l2_2.high,
                                  "S2in + k2/k1 (S1in - lambda1^2) outside I2"));
    } else if (i == 0 && j == 0 && k == 1 && l == 1) {
        c = cond_and(cond_lt(p.S1in, l1_1.low, "S1in < lambda1^1"),
                     cond_outside(p.S2in, l2_1.low, l2_1.high, "S2in outside I1"));
    } else if (i == 1 && j == 0 && k == 1 && l == 0) {
        const double s2u = p.S2in + (p.k2 / p.k1) * (p.S1in - l1_1.low);
        c = cond_and(cond_outside(s2u, l2_1.low, l2_1.high,
                                  "S2in + k2/k1 (S1in - lambda1^1) outside I1"),
                     cond_or(cond_lt(e.phi1, 0.0, "phi1 < 0"), cond_gt(e.phi2, 0.0, "phi2 > 0")));
    } else if (i == 1 && j == 0 && k == 1 && l == 1) {
        const double s2u = p.S2in + (p.k2 / p.k1) * (p.S1in - l1_1.low);
        c = cond_outside(s2u, l2_1.low, l2_1.high,
                         "S2in + k2/k1 (S1in - lambda1^1) outside I1");
    } else if (i == 0 && j == 1 && k == 0 && l == 1) {
        c = cond_and(cond_lt(p.S1in, l1_1.low, "S1in < lambda1^1"),
                     cond_lt(p.S1in, l1_2.low, "S1in < lambda1^2"));
    } else if ((i == 0 || i == 1) && j == 1 && k == 1 && l == 1) {
        // Coexistence in reactor 2: determinant and trace of J3^3 via the
        // fixed-point function slopes at the root.
        const AuxFunctions aux = make_aux(p, e.state.x11(), e.state.s21(), e.state.x21(),
                                          e.state.x12());
        const double x22 = e.state.x22();
        const double gp = aux.dg2(x22);
        const double fp = aux.df2(x22);
        const double tr = -p.D2() - x22 * (gp - fp / p.alpha);
        Cond cj33 = cond_and(cond_gt(gp, fp, "g2' > f2'"), cond_lt(tr, 0.0, "Tr(J3^3) < 0"));
        if (i == 0) {
            c = cond_and(cond_lt(p.S1in, l1_1.low, "S1in < lambda1^1"), cj33);
        } else {
            c = cj33;
        }
    } else {
        throw std::invalid_argument("table_verdict: unrecognized family " + e.label.str());
    }
    return {verdict_from(c, kStabilityMargin), c.margin};
}

}  // namespace

std::pair<std::complex<double>, std::complex<double>> quadratic_eigenvalues(double tr, double det) {
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        // Larger-magnitude root first, companion by the product identity.
        const double q = (tr >= 0.0) ? 0.5 * (tr + s) : 0.5 * (tr - s);
        if (q == 0.0) return {std::complex<double>(0.0), std::complex<double>(0.0)};
        return {std::complex<double>(q), std::complex<double>(det / q)};
    }
    const double re = 0.5 * tr;
    const double im = 0.5 * std::sqrt(-disc);
    return {{re, im}, {re, -im}};
}

std::array<BlockSummary, 4> diagonal_blocks(const Jacobian& J) {
    for (int row = 0; row < 8; ++row) {
        for (int col = 0; col < 8; ++col) {
            if (!Jacobian::structural(row, col) && J(row, col) != 0.0) {
                throw StructuralError("Jacobian entry (" + std::to_string(row) + "," +
                                      std::to_string(col) + ") violates the sparsity pattern");
            }
        }
    }
    std::array<BlockSummary, 4> blocks;
    for (int b = 0; b < 4; ++b) {
        const int o = 2 * b;
        BlockSummary& s = blocks[static_cast<std::size_t>(b)];
        s.tr = J(o, o) + J(o + 1, o + 1);
        s.det = J(o, o) * J(o + 1, o + 1) - J(o, o + 1) * J(o + 1, o);
        std::tie(s.eig1, s.eig2) = quadratic_eigenvalues(s.tr, s.det);
    }
    return blocks;
}

std::array<std::complex<double>, 8> block_eigenvalues(const Jacobian& J) {
    const auto blocks = diagonal_blocks(J);
    std::array<std::complex<double>, 8> eigs;
    for (int b = 0; b < 4; ++b) {
        eigs[static_cast<std::size_t>(2 * b)] = blocks[static_cast<std::size_t>(b)].eig1;
        eigs[static_cast<std::size_t>(2 * b + 1)] = blocks[static_cast<std::size_t>(b)].eig2;
    }
    return eigs;
}

StabilityVerdict classify(const ModelParams& p, const Equilibrium& e) {
    if (!e.exists) throw std::invalid_argument("classify: equilibrium does not exist");

    StabilityVerdict out;
    out.blocks = diagonal_blocks(jacobian(p, e.state));

    double max_re = -kInfinite;
    double min_abs_re = kInfinite;
    for (const auto& b : out.blocks) {
        for (const auto& z : {b.eig1, b.eig2}) {
            max_re = std::max(max_re, z.real());
            min_abs_re = std::min(min_abs_re, std::abs(z.real()));
        }
    }
    out.numeric_margin = min_abs_re;
    if (max_re > kStabilityMargin) {
        out.numeric = Verdict::Unstable;
    } else if (max_re < -kStabilityMargin) {
        out.numeric = Verdict::LES;
    } else {
        out.numeric = Verdict::Marginal;
    }

    const TableResult t = table_verdict(p, e);
    out.table = t.verdict;
    out.table_margin = t.margin;

    out.agreement = !(out.numeric != out.table && out.numeric != Verdict::Marginal &&
                      out.table != Verdict::Marginal && out.numeric_margin > kStabilityMargin);
    out.hopf = hopf_candidate(p, e);
    return out;
}

bool hopf_candidate(const ModelParams& p, const Equilibrium& e) {
    const auto [i, j, k, l, branch] = e.label;
    if (!(j == 1 && k == 1 && l == 1)) return false;  // E01^11 / E11^11 branches only
    if (!e.exists) return false;
    const auto blocks = diagonal_blocks(jacobian(p, e.state));
    const BlockSummary& j33 = blocks[3];
    return j33.det > kStabilityMargin && j33.tr >= -kStabilityMargin;
}

std::vector<BranchVerdict> ordered_branch_stability(const ModelParams& p,
                                                    const std::vector<Equilibrium>& branches) {
    if (branches.empty()) return {};
    const FamilyLabel base = branches.front().label;
    if (!(base.j == 1 && base.k == 1 && base.l == 1)) {
        throw std::invalid_argument("ordered_branch_stability: needs an E01^11 or E11^11 family");
    }
    const int k = static_cast<int>(branches.size());
    std::vector<BranchVerdict> out;
    out.reserve(branches.size());

    const BreakEven l1_1 = lambda1(p.mu1, p.D, p.r, p.alpha, 1);
    for (int l = 1; l <= k; ++l) {
        const Equilibrium& e = branches[static_cast<std::size_t>(l - 1)];
        if (e.label.i != base.i || e.label.j != base.j || e.label.branch != l || !e.exists) {
            throw std::invalid_argument("ordered_branch_stability: branches must be the ordered, existing roots");
        }

        Cond cj33 = cond_true();
        if (l == k) {
            // last root: stable side of the fixed-point crossing
        } else if (l % 2 == 0) {
            cj33 = {false, kInfinite, "even branch"};
        } else {
            const AuxFunctions aux = make_aux(p, e.state.x11(), e.state.s21(), e.state.x21(),
                                              e.state.x12());
            const double x22 = e.state.x22();
            const double tr = -p.D2() - x22 * (aux.dg2(x22) - aux.df2(x22) / p.alpha);
            cj33 = cond_lt(tr, 0.0, "Tr(J3^3) < 0");
        }
        Cond c = cj33;
        if (base.i == 0) {
            c = cond_and(cond_lt(p.S1in, l1_1.low, "S1in < lambda1^1"), cj33);
        }

        BranchVerdict bv;
        bv.predicted = verdict_from(c, kStabilityMargin);
        const StabilityVerdict sv = classify(p, e);
        bv.classified = sv.numeric;
        bv.hopf = sv.hopf;
        bv.consistent = !(bv.predicted != bv.classified && bv.predicted != Verdict::Marginal &&
                          bv.classified != Verdict::Marginal);
        out.push_back(bv);
    }
    return out;
}

std::vector<ClassifiedEquilibrium> classify_all(const ModelParams& p,
                                                const std::vector<Equilibrium>& eqs) {
    std::vector<ClassifiedEquilibrium> out;
    out.reserve(eqs.size());
    for (const auto& e : eqs) {
        ClassifiedEquilibrium ce;
        ce.eq = e;
        if (e.exists) ce.verdict = classify(p, e);
        out.push_back(std::move(ce));
    }
    return out;
}

std::vector<ClassifiedEquilibrium> classify_all(const ModelParams& p) {
    return classify_all(p, enumerate_all(p));
}

}  // namespace am2
