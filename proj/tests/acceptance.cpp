// Acceptance suite: one line per criterion, [PASS]/[FAIL], exit 0 only if
// every criterion holds. Draw ranges: D log-uniform in [0.01, 2], r uniform
// in [0.05, 0.95], feeds uniform in (0, 20], stoichiometry and growth laws
// fixed at the reference point.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "am2/check.hpp"
#include "am2/diagram.hpp"
#include "am2/io.hpp"
#include "am2/simulate.hpp"
#include "am2/stability.hpp"

using namespace am2;

namespace {

int g_failures = 0;

ModelParams reference_params() {
    return ModelParams(2.0, 1.0, 1.0, 0.5, 0.4, 0.5, 3.0, 2.0,
                       GrowthLaw::monod(1.0, 1.0), GrowthLaw::haldane(1.0, 1.0, 4.0));
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const char* title, bool pass, const std::string& details) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, title,
                details.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// --- criterion 1: equilibrium residuals over 500 draws --------------------

void criterion_1() {
    Timer timer;
    check::Rng rng(1001);
    const auto base = reference_params();
    double worst = 0.0;
    int count = 0;
    for (int d = 0; d < 500; ++d) {
        const ModelParams p = check::random_params(rng, base);
        for (const auto& e : enumerate_all(p)) {
            if (!e.exists) continue;
            worst = std::max(worst, residual(p, e));
            ++count;
        }
    }
    const double elapsed = timer.seconds();
    report(1, "equilibrium residuals <= 1e-10 over 500 draws",
           worst <= 1e-10 && elapsed <= 60.0,
           std::to_string(count) + " equilibria, max residual " + fmt(worst) + ", " +
               fmt(elapsed) + " s");
}

// --- criterion 2: closed-form component reconstruction --------------------

void criterion_2() {
    check::Rng rng(1002);
    const auto base = reference_params();
    double worst = 0.0;
    int checked = 0;

    auto close = [&](double got, double want) {
        if (std::isnan(want)) return;
        worst = std::max(worst, std::abs(got - want));
    };

    for (int d = 0; d < 51; ++d) {
        const ModelParams p = (d == 0) ? base : check::random_params(rng, base);
        const BreakEven l1_1 = lambda1(p.mu1, p.D, p.r, p.alpha, 1);
        const BreakEven l1_2 = lambda1(p.mu1, p.D, p.r, p.alpha, 2);
        const BreakEven l2_1 = lambda2(p.mu2, p.D, p.r, p.alpha, 1);
        const BreakEven l2_2 = lambda2(p.mu2, p.D, p.r, p.alpha, 2);
        const double ak1 = p.alpha * p.k1;
        const double ak2 = p.alpha * p.k2;
        const double ak3 = p.alpha * p.k3;

        for (const auto& e : enumerate_all(p)) {
            if (!e.exists) continue;
            ++checked;
            const auto [i, j, k, l, branch] = e.label;
            const SystemState& s = e.state;

            // upper components straight from the closed forms
            if (i == 0) {
                close(s.s11(), p.S1in);
                close(s.x11(), 0.0);
            } else {
                close(s.s11(), l1_1.low);
                close(s.x11(), (p.S1in - l1_1.low) / ak1);
            }
            if (j == 0) {
                if (i == 0) close(s.s21(), p.S2in);
                if (i == 1) close(s.s21(), p.S2in + (p.k2 / p.k1) * (p.S1in - l1_1.low));
                close(s.x21(), 0.0);
            } else {
                const double lam = (j == 1) ? l2_1.low : l2_1.high;
                close(s.s21(), lam);
                if (i == 0) close(s.x21(), (p.S2in - lam) / ak3);
                if (i == 1) close(s.x21(), p.k2 * (p.S1in - aux_F(p, 1, j)) / (ak1 * p.k3));
            }

            // lower components per the note formulas
            if (k == 0) {
                close(s.s12(), p.S1in);
                close(s.x12(), 0.0);
            } else if (i == 0) {  // biomass 1 enters reactor 2 at its break-even
                close(s.s12(), l1_2.low);
                close(s.x12(), (p.S1in - l1_2.low) / ak1);
            } else {  // implicit root: reconstruct substrate from it
                close(s.s12(), p.S1in - ak1 * e.x12_star);
                close(s.x12(), e.x12_star);
            }
            if (l == 0) {
                close(s.x22(), 0.0);
                if (k == 0) close(s.s22(), p.S2in);
                if (k == 1 && i == 0) {
                    close(s.s22(), p.S2in + (p.k2 / p.k1) * (p.S1in - l1_2.low));
                }
                if (k == 1 && i == 1) close(s.s22(), p.S2in + ak2 * e.x12_star);
            } else if (j == 0) {  // lower break-even branch families
                const double lam = (l == 1) ? l2_2.low : l2_2.high;
                close(s.s22(), lam);
                if (k == 0) close(s.x22(), (p.S2in - lam) / ak3);
                if (k == 1 && i == 0) {
                    close(s.x22(), p.k2 * (p.S1in - aux_F(p, 2, l)) / (ak1 * p.k3));
                }
                if (k == 1 && i == 1) close(s.x22(), aux_phi(p, l, e.x12_star) / ak3);
            } else {  // coexistence root in reactor 2
                close(s.x22(), e.x22_star);
                if (k == 0) close(s.s22(), p.S2in - ak3 * e.x22_star);
                if (k == 1 && i == 0) {
                    close(s.s22(), (p.k2 / p.k1) * (p.S1in - l1_2.low) + p.S2in - ak3 * e.x22_star);
                }
                if (k == 1 && i == 1) close(s.s22(), p.S2in + ak2 * e.x12_star - ak3 * e.x22_star);
            }
        }
    }
    report(2, "closed-form component reconstruction within 1e-10",
           worst <= 1e-10, std::to_string(checked) + " equilibria, max deviation " + fmt(worst));
}

// --- criterion 3: jacobian against central differences --------------------

void criterion_3() {
    check::Rng rng(1003);
    const auto base = reference_params();
    double worst = 0.0;
    bool sparsity_ok = true;
    for (int d = 0; d < 100; ++d) {
        const ModelParams p = check::random_params(rng, base);
        SystemState x;
        for (std::size_t i = 0; i < kStateDim; ++i) x[i] = rng.uniform(0.05, 20.0);
        const Jacobian ja = jacobian(p, x);
        const Jacobian jf = check::fd_jacobian(p, x);
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) {
                worst = std::max(worst, std::abs(ja(r, c) - jf(r, c)) /
                                            std::max(1.0, std::abs(ja(r, c))));
                if (!Jacobian::structural(r, c) && ja(r, c) != 0.0) sparsity_ok = false;
            }
        }
    }
    report(3, "analytic vs finite-difference jacobian <= 1e-6, exact sparsity",
           worst <= 1e-6 && sparsity_ok, "max relative entry error " + fmt(worst));
}

// --- criterion 4: verdict agreement and forced instability -----------------

void criterion_4() {
    check::Rng rng(1004);
    const auto base = reference_params();
    int classified = 0, marginal = 0, unstable_branch = 0;
    std::string failure;
    for (int d = 0; d < 500 && failure.empty(); ++d) {
        const ModelParams p = check::random_params(rng, base);
        for (const auto& ce : classify_all(p)) {
            if (!ce.verdict) continue;
            ++classified;
            const auto& v = *ce.verdict;
            const bool margins_clear = v.numeric != Verdict::Marginal &&
                                       v.table != Verdict::Marginal &&
                                       v.numeric_margin > kStabilityMargin;
            if (!margins_clear) {
                ++marginal;
            } else if (v.numeric != v.table) {
                failure = "verdict mismatch at " + ce.eq.label.str();
                break;
            }
            if (ce.eq.label.unstable_branch()) {
                if (v.numeric == Verdict::Unstable) {
                    ++unstable_branch;
                } else if (v.numeric != Verdict::Marginal) {
                    failure = "break-even-branch family " + ce.eq.label.str() + " not unstable";
                    break;
                }
            }
        }
    }
    report(4, "numeric vs closed-form verdicts agree; j=2/l=2 families unstable",
           failure.empty(),
           failure.empty() ? std::to_string(classified) + " verdicts, " +
                                 std::to_string(marginal) + " near-boundary skipped, " +
                                 std::to_string(unstable_branch) + " forced-unstable confirmed"
                           : failure);
}

// --- criterion 5: appendix determinant/trace identities --------------------

void criterion_5() {
    check::Rng rng(1005);
    const auto base = reference_params();
    int coexistence = 0;
    double worst = 0.0;
    for (int d = 0; coexistence < 100 && d < 3000; ++d) {
        const ModelParams p = check::random_params(rng, base);
        for (const auto& e : enumerate_all(p)) {
            if (!e.exists) continue;
            const bool has_x12_root = e.label.k == 1 && e.label.i == 1;
            const bool has_x22_root = e.label.l == 1 && e.label.branch >= 1;
            if (!has_x12_root && !has_x22_root) continue;
            const auto blocks = diagonal_blocks(jacobian(p, e.state));
            const AuxFunctions aux = make_aux(p, e.state.x11(), e.state.s21(), e.state.x21(),
                                              e.state.x12());
            auto rel = [](double got, double want) {
                return std::abs(got - want) / std::max(1.0, std::abs(want));
            };
            if (has_x12_root) {
                const double x12 = e.state.x12();
                worst = std::max(worst, rel(blocks[2].det,
                                            p.D2() * x12 * (aux.dg1(x12) - aux.df1(x12))));
                worst = std::max(worst,
                                 rel(blocks[2].tr,
                                     -p.D2() - x12 * (aux.dg1(x12) - aux.df1(x12) / p.alpha)));
            }
            if (has_x22_root) {
                const double x22 = e.state.x22();
                worst = std::max(worst, rel(blocks[3].det,
                                            p.D2() * x22 * (aux.dg2(x22) - aux.df2(x22))));
                worst = std::max(worst,
                                 rel(blocks[3].tr,
                                     -p.D2() - x22 * (aux.dg2(x22) - aux.df2(x22) / p.alpha)));
                ++coexistence;
            }
        }
    }
    report(5, "block det/trace equal the fixed-point slope identities",
           coexistence >= 100 && worst <= 1e-8,
           std::to_string(coexistence) + " coexistence equilibria, max relative error " +
               fmt(worst));
}

// --- criterion 6: scalar-root lemmas ---------------------------------------

void criterion_6() {
    check::Rng rng(1006);
    const auto base = reference_params();
    int lemma1_draws = 0;
    int lemma2_instances = 0, cleared_peak = 0, below_peak = 0;
    std::string failure;

    for (int d = 0; (lemma1_draws < 100 || lemma2_instances < 100) && d < 4000 && failure.empty();
         ++d) {
        const ModelParams p = check::random_params(rng, base);
        const auto uppers = upper_equilibria(p);

        if (uppers[1].exists && lemma1_draws < 100) {
            ++lemma1_draws;
            const AuxFunctions a = make_aux(p, uppers[1].x11, uppers[1].s21, uppers[1].x21, 0.0);
            const int changes = check::count_sign_changes(
                [&](double x) { return a.f1(x) - a.g1(x); }, uppers[1].x11,
                p.S1in / (p.alpha * p.k1), 10000);
            if (changes != 1) failure = "lemma 1: " + std::to_string(changes) + " sign changes";
        }

        for (const auto& u : uppers) {
            const bool star = u.family == UpperFamily::E01 || u.family == UpperFamily::E02 ||
                              u.family == UpperFamily::E11 || u.family == UpperFamily::E12;
            if (!star || !u.exists || !failure.empty()) continue;
            double x12 = 0.0;
            if (u.family == UpperFamily::E11 || u.family == UpperFamily::E12) x12 = solve_x12(p, u);
            const X22Roots rr = solve_x22_all(p, u, x12);
            if (rr.roots.empty()) {
                failure = "lemma 2: no root located";
                break;
            }
            ++lemma2_instances;
            if (!rr.tangency && rr.roots.size() % 2 == 0) {
                failure = "lemma 2: even root count without tangency flag";
                break;
            }
            for (std::size_t b = 0; b < rr.roots.size(); ++b) {
                if (!(rr.roots[b] > u.x21 && rr.roots[b] < rr.d) ||
                    (b > 0 && !(rr.roots[b] > rr.roots[b - 1]))) {
                    failure = "lemma 2: ordering chain broken";
                    break;
                }
            }
            // The x2m interleaving holds exactly when the f2 peak clears g2;
            // otherwise every crossing happens on the rising side.
            const AuxFunctions a = make_aux(p, u.x11, u.s21, u.x21, x12);
            if (rr.x2m <= u.x21) {
                ++cleared_peak;  // decreasing case: single root past the peak by construction
                if (rr.roots.size() != 1) failure = "lemma 2: non-unique root in decreasing case";
            } else if (a.f2(rr.x2m) - a.g2(rr.x2m) > 0.0) {
                ++cleared_peak;
                if (!(rr.roots.back() > rr.x2m)) failure = "lemma 2: last root not past the peak";
                for (std::size_t b = 0; b + 1 < rr.roots.size(); ++b) {
                    if (!(rr.roots[b] < rr.x2m)) failure = "lemma 2: interior root past the peak";
                }
            } else {
                ++below_peak;
                if (!(rr.roots.back() <= rr.x2m)) failure = "lemma 2: root past a submerged peak";
            }
        }
    }
    report(6, "lemma 1 unique crossing; lemma 2 parity and root ordering",
           failure.empty() && lemma1_draws >= 100 && lemma2_instances >= 100,
           failure.empty()
               ? std::to_string(lemma1_draws) + " lemma-1 draws, " +
                     std::to_string(lemma2_instances) + " lemma-2 instances (" +
                     std::to_string(cleared_peak) + " peak-cleared, " +
                     std::to_string(below_peak) + " submerged-peak)"
               : failure);
}

// --- criterion 7: trajectory invariants ------------------------------------

void criterion_7() {
    Timer timer;
    check::Rng rng(1007);
    const auto base = reference_params();
    std::size_t violations = 0;
    int runs = 0;
    for (int d = 0; d < 50; ++d) {
        const ModelParams p = check::random_params(rng, base);
        const auto w = omega_functionals(p, SystemState());
        // alternate between starts inside and far outside the region
        const double stretch = (d % 2 == 0) ? 0.5 : 3.0;
        SystemState x0;
        x0[iS11] = rng.uniform(0.0, stretch * w.bound1 / 2);
        x0[iX11] = rng.uniform(0.0, stretch * w.bound1 / (2 * (p.k1 - p.k2)));
        x0[iS21] = rng.uniform(0.0, stretch * w.bound1 / 2);
        x0[iX21] = rng.uniform(0.0, stretch * w.bound1 / (2 * p.k3));
        x0[iS12] = rng.uniform(0.0, stretch * w.bound2 / 2);
        x0[iX12] = rng.uniform(0.0, stretch * w.bound2 / (2 * (p.k1 - p.k2)));
        x0[iS22] = rng.uniform(0.0, stretch * w.bound2 / 2);
        x0[iX22] = rng.uniform(0.0, stretch * w.bound2 / (2 * p.k3));

        const Trajectory traj = integrate(p, x0, default_horizon(p), 1e-8, 1e-10);
        violations += monitor_invariants(traj, p).size();
        if (traj.stiffness_failure) ++violations;
        ++runs;
    }
    const double elapsed = timer.seconds();
    report(7, "50 trajectories: nonnegativity and decay envelopes hold",
           violations == 0 && elapsed <= 120.0,
           std::to_string(runs) + " runs, " + std::to_string(violations) + " violations, " +
               fmt(elapsed) + " s");
}

// --- criterion 8: dynamics corroborate the verdicts -------------------------

void criterion_8() {
    check::Rng rng(1008);
    const auto base = reference_params();
    int sets = 0, les_runs = 0, unstable_runs = 0;
    std::string failure;

    while (sets < 20 && failure.empty()) {
        const ModelParams p = check::random_params(rng, base);
        const double horizon = default_horizon(p);
        const auto classified = classify_all(p);

        // Keep parameter sets whose verdicts are resolvable at the test
        // horizon: decisive eigenvalue at least 0.15 D in magnitude.
        bool resolvable = true;
        for (const auto& ce : classified) {
            if (!ce.verdict) continue;
            if (ce.verdict->numeric == Verdict::Marginal) {
                resolvable = false;
                break;
            }
            double max_re = -kInfinite;
            for (const auto& b : ce.verdict->blocks) {
                max_re = std::max({max_re, b.eig1.real(), b.eig2.real()});
            }
            if (std::abs(max_re) < 0.15 * p.D) {
                resolvable = false;
                break;
            }
        }
        if (!resolvable) continue;
        ++sets;

        for (const auto& ce : classified) {
            if (!ce.verdict || !failure.empty()) continue;
            const auto& e = ce.eq;
            if (ce.verdict->numeric == Verdict::LES) {
                for (int s = 0; s < 10; ++s) {
                    SystemState x0 = e.state;
                    for (std::size_t i = 0; i < kStateDim; ++i) {
                        x0[i] = std::max(0.0, x0[i] + 1e-3 * (2.0 * rng.uniform() - 1.0));
                    }
                    const Trajectory traj = integrate(p, x0, horizon, 1e-9, 1e-11);
                    const double dist = state_distance(traj.final_state(), e.state);
                    ++les_runs;
                    if (dist > 1e-6) {
                        failure = "LES " + e.label.str() + " did not return (dist " + fmt(dist) + ")";
                        break;
                    }
                }
            } else if (ce.verdict->numeric == Verdict::Unstable) {
                const Jacobian J = jacobian(p, e.state);
                std::complex<double> lam(-kInfinite, 0.0);
                for (const auto& b : ce.verdict->blocks) {
                    for (const auto& z : {b.eig1, b.eig2}) {
                        if (z.real() > lam.real()) lam = z;
                    }
                }
                const Vec8 dir = check::real_eigen_direction(J, lam);
                double escape = 0.0;
                for (double sign : {1.0, -1.0}) {
                    SystemState x0 = e.state;
                    for (std::size_t i = 0; i < kStateDim; ++i) {
                        x0[i] = std::max(0.0, x0[i] + sign * 1e-6 * dir[i]);
                    }
                    const Trajectory traj = integrate(p, x0, horizon, 1e-9, 1e-11);
                    escape = std::max(escape, state_distance(traj.final_state(), e.state));
                }
                ++unstable_runs;
                if (escape < 1e-2) {
                    failure = "unstable " + e.label.str() + " did not depart (dist " +
                              fmt(escape) + ")";
                }
            }
        }
    }
    report(8, "perturbation-return for LES, eigendirection-escape for unstable",
           failure.empty() && sets == 20,
           failure.empty() ? std::to_string(sets) + " parameter sets, " +
                                 std::to_string(les_runs) + " return runs, " +
                                 std::to_string(unstable_runs) + " escape runs"
                           : failure);
}

// --- criterion 9: operating-diagram consistency ------------------------------

void criterion_9() {
    Timer timer;
    const auto base = reference_params();
    const AxisSpec a1{OperatingAxis::S1in, 10.0 / 64.0, 10.0, 64};
    const AxisSpec a2{OperatingAxis::S2in, 10.0 / 64.0, 10.0, 64};

    const RegionGrid grid = scan(base, a1, a2, 4);
    const std::string csv = io::grid_csv(grid);
    const RegionGrid rerun = scan(base, a1, a2, 4);
    const bool identical = io::grid_csv(rerun) == csv;

    const auto curves = boundary_curves(grid, base);
    const double w1 = a1.step(), w2 = a2.step();
    auto near_curve = [&](double x, double y) {
        for (const auto& c : curves) {
            for (const auto& [cx, cy] : c.points) {
                if (std::abs(cx - x) <= w1 && std::abs(cy - y) <= w2) return true;
            }
        }
        return false;
    };

    int transitions = 0, uncovered = 0;
    for (int j = 0; j < a2.n; ++j) {
        for (int i = 0; i + 1 < a1.n; ++i) {
            if (grid.at(i, j).key() != grid.at(i + 1, j).key()) {
                ++transitions;
                if (!near_curve(0.5 * (a1.value(i) + a1.value(i + 1)), a2.value(j))) ++uncovered;
            }
        }
    }
    for (int j = 0; j + 1 < a2.n; ++j) {
        for (int i = 0; i < a1.n; ++i) {
            if (grid.at(i, j).key() != grid.at(i, j + 1).key()) {
                ++transitions;
                if (!near_curve(a1.value(i), 0.5 * (a2.value(j) + a2.value(j + 1)))) ++uncovered;
            }
        }
    }
    const double elapsed = timer.seconds();
    report(9, "64x64 diagram: transitions on analytic curves, byte-identical rerun",
           identical && uncovered == 0 && elapsed <= 120.0,
           std::to_string(transitions) + " transitions, " + std::to_string(uncovered) +
               " uncovered, rerun " + (identical ? "identical" : "DIFFERS") + ", " +
               fmt(elapsed) + " s");
}

// --- criterion 10: hopf-candidate scan refinement ----------------------------

void criterion_10() {
    const auto base = reference_params();
    const std::array<std::pair<double, double>, 3> feeds = {{{3.0, 2.0}, {8.0, 6.0}, {15.0, 12.0}}};
    bool stable = true;
    int total_candidates = 0;
    std::string detail;

    for (const auto& [s1, s2] : feeds) {
        const ModelParams p = base.with(base.D, base.r, s1, s2);
        const AxisSpec a1{OperatingAxis::D, 0.05, 1.5, 25};
        const AxisSpec a2{OperatingAxis::R, 0.1, 0.9, 25};
        const AxisSpec f1{OperatingAxis::D, 0.05, 1.5, 49};
        const AxisSpec f2{OperatingAxis::R, 0.1, 0.9, 49};
        const RegionGrid coarse = scan(p, a1, a2, 4);
        const RegionGrid fine = scan(p, f1, f2, 4);
        const auto cells_c = hopf_map(coarse);
        const auto cells_f = hopf_map(fine);
        total_candidates += static_cast<int>(cells_c.size());

        // candidate sets must agree within one coarse cell width
        auto near_in = [](double x, double y, const std::vector<std::pair<int, int>>& cells,
                          const RegionGrid& g, double wx, double wy) {
            for (const auto& [ci, cj] : cells) {
                if (std::abs(g.axis1.value(ci) - x) <= wx && std::abs(g.axis2.value(cj) - y) <= wy) {
                    return true;
                }
            }
            return false;
        };
        for (const auto& [i, j] : cells_c) {
            if (!near_in(a1.value(i), a2.value(j), cells_f, fine, a1.step(), a2.step())) {
                stable = false;
            }
        }
        for (const auto& [i, j] : cells_f) {
            if (!near_in(f1.value(i), f2.value(j), cells_c, coarse, a1.step(), a2.step())) {
                stable = false;
            }
        }
        detail += std::to_string(cells_c.size()) + "/" + std::to_string(cells_f.size()) + " ";
    }
    report(10, "hopf-candidate cells stable under 2x refinement (exploratory)",
           stable,
           "coarse/fine candidates per feed: " + detail +
               (total_candidates == 0 ? "(none found)" : "(reported as exploratory only)"));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
