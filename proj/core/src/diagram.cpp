#include "am2/diagram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "scalar_solvers.hpp"

namespace am2 {

const char* to_string(OperatingAxis a) noexcept {
    switch (a) {
        case OperatingAxis::D: return "D";
        case OperatingAxis::S1in: return "S1in";
        case OperatingAxis::S2in: return "S2in";
        case OperatingAxis::R: return "r";
    }
    return "?";
}

OperatingAxis axis_from_string(const std::string& s) {
    if (s == "D") return OperatingAxis::D;
    if (s == "S1in") return OperatingAxis::S1in;
    if (s == "S2in") return OperatingAxis::S2in;
    if (s == "r") return OperatingAxis::R;
    throw std::invalid_argument("unknown operating axis: " + s);
}

namespace {

ModelParams substitute(const ModelParams& base, OperatingAxis axis, double v) {
    switch (axis) {
        case OperatingAxis::D: return base.with(v, base.r, base.S1in, base.S2in);
        case OperatingAxis::S1in: return base.with(base.D, base.r, v, base.S2in);
        case OperatingAxis::S2in: return base.with(base.D, base.r, base.S1in, v);
        case OperatingAxis::R: return base.with(base.D, v, base.S1in, base.S2in);
    }
    throw std::invalid_argument("bad axis");
}

CellSignature signature_at(const ModelParams& p) {
    CellSignature sig;
    const auto classified = classify_all(p);
    // one existing entry per family, annotated with its branch count
    for (const auto& ce : classified) {
        const auto& e = ce.eq;
        if (e.marginal || e.tangency) sig.boundary = true;
        if (!e.exists) continue;
        if (e.label.branch <= 1) {
            FamilyLabel fam = e.label;
            fam.branch = 0;
            std::string entry = fam.str();
            if (e.root_count > 1) entry += "x" + std::to_string(e.root_count);
            sig.existing.push_back(std::move(entry));
        }
        if (ce.verdict) {
            if (!ce.verdict->agreement) {
                sig.failed = true;
                sig.error = "verdict disagreement at " + e.label.str();
            }
            if (ce.verdict->numeric == Verdict::Marginal ||
                ce.verdict->table == Verdict::Marginal) {
                sig.boundary = true;
            }
            if (ce.verdict->numeric == Verdict::LES) sig.les.push_back(e.label.str());
            if (ce.verdict->hopf) sig.hopf = true;
        }
    }
    std::sort(sig.existing.begin(), sig.existing.end());
    std::sort(sig.les.begin(), sig.les.end());
    return sig;
}

}  // namespace

std::string CellSignature::key() const {
    std::string k;
    for (const auto& s : existing) {
        k += s;
        k += ',';
    }
    k += '|';
    for (const auto& s : les) {
        k += s;
        k += ',';
    }
    if (hopf) k += "|H";
    if (boundary) k += "|B";
    if (failed) k += "|F";
    return k;
}

ModelParams cell_params(const ModelParams& base, const AxisSpec& a1, const AxisSpec& a2,
                        int i, int j) {
    return substitute(substitute(base, a1.axis, a1.value(i)), a2.axis, a2.value(j));
}

RegionGrid scan(const ModelParams& base, const AxisSpec& a1, const AxisSpec& a2, int threads) {
    if (a1.axis == a2.axis) throw std::invalid_argument("scan: axes must be distinct");
    if (a1.n < 2 || a2.n < 2) throw std::invalid_argument("scan: need at least 2 points per axis");

    RegionGrid grid;
    grid.axis1 = a1;
    grid.axis2 = a2;
    const std::size_t total = static_cast<std::size_t>(a1.n) * static_cast<std::size_t>(a2.n);
    grid.cells.resize(total);

    auto work = [&](std::size_t idx) {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(a1.n));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(a1.n));
        CellSignature sig;
        try {
            sig = signature_at(cell_params(base, a1, a2, i, j));
        } catch (const std::exception& ex) {
            sig.failed = true;
            sig.error = ex.what();
        }
        grid.cells[idx] = std::move(sig);
    };

    const int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        for (std::size_t idx = 0; idx < total; ++idx) work(idx);
    } else {
        std::atomic<std::size_t> counter{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int tId = 0; tId < nthreads; ++tId) {
            pool.emplace_back([&] {
                for (std::size_t idx = counter.fetch_add(1); idx < total; idx = counter.fetch_add(1)) {
                    work(idx);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return grid;
}

namespace {

// Traces one S-axis boundary value along the other axis. `eval` returns
// the critical S coordinate for the parameters of a sample (or NaN).
template <class Eval>
void trace_curve(std::vector<BoundaryCurve>& out, const std::string& name, bool s_on_axis1,
                 const AxisSpec& s_axis, const AxisSpec& other, const ModelParams& base,
                 OperatingAxis other_axis, Eval&& eval) {
    BoundaryCurve curve;
    curve.name = name;
    const int samples = std::max(2 * other.n, 64);
    for (int t = 0; t <= samples; ++t) {
        const double ov = other.lo + (other.hi - other.lo) * t / samples;
        double s = std::numeric_limits<double>::quiet_NaN();
        try {
            s = eval(substitute(base, other_axis, ov));
        } catch (const std::exception&) {
            s = std::numeric_limits<double>::quiet_NaN();
        }
        if (!std::isfinite(s) || s < s_axis.lo || s > s_axis.hi) {
            if (curve.points.size() >= 2) out.push_back(curve);
            curve.points.clear();
            continue;
        }
        curve.points.emplace_back(s_on_axis1 ? s : ov, s_on_axis1 ? ov : s);
    }
    if (curve.points.size() >= 2) out.push_back(std::move(curve));
}

double lemma1_x12(const ModelParams& p) {
    // X1^{2*} for the biomass-1-only upper state; NaN when E10 is absent.
    const auto uppers = upper_equilibria(p);
    if (!uppers[1].exists) return std::numeric_limits<double>::quiet_NaN();
    return solve_x12(p, uppers[1]);
}

// The six families whose reactor-2 coexistence level is a root of f2 = g2
// and can therefore change multiplicity across a fold.
constexpr std::array<FamilyLabel, 6> kStarFamilies = {{{0, 1, 0, 1, 0},
                                                       {0, 2, 0, 1, 0},
                                                       {0, 1, 1, 1, 0},
                                                       {0, 2, 1, 1, 0},
                                                       {1, 1, 1, 1, 0},
                                                       {1, 2, 1, 1, 0}}};

std::array<int, 6> star_root_counts(const ModelParams& q) {
    std::array<int, 6> counts{};
    for (const auto& e : enumerate_all(q)) {
        if (!e.exists || e.label.branch != 1) continue;
        for (std::size_t f = 0; f < kStarFamilies.size(); ++f) {
            const FamilyLabel& fam = kStarFamilies[f];
            if (e.label.i == fam.i && e.label.j == fam.j && e.label.k == fam.k &&
                e.label.l == fam.l) {
                counts[f] = e.root_count;
            }
        }
    }
    return counts;
}

// Root-multiplicity folds are genuine signature boundaries (branch counts
// enter the cell signatures) but have no closed form; trace them by
// bisecting the integer count along grid-aligned scan lines.
void trace_fold_curves(std::vector<BoundaryCurve>& out, const RegionGrid& grid,
                       const ModelParams& base) {
    const AxisSpec& a1 = grid.axis1;
    const AxisSpec& a2 = grid.axis2;
    auto counts_at = [&](double v1, double v2) {
        try {
            return star_root_counts(substitute(substitute(base, a1.axis, v1), a2.axis, v2));
        } catch (const std::exception&) {
            return std::array<int, 6>{};
        }
    };

    std::array<std::vector<std::pair<double, double>>, 6> points;
    auto sweep = [&](bool along_axis1) {
        const AxisSpec& along = along_axis1 ? a1 : a2;
        const AxisSpec& across = along_axis1 ? a2 : a1;
        const int n_along = std::clamp(2 * along.n, 64, 160);
        const int n_across = std::clamp(4 * across.n, 64, 256);
        for (int s = 0; s <= n_along; ++s) {
            const double va = along.lo + (along.hi - along.lo) * s / n_along;
            auto at = [&](double vc) {
                return along_axis1 ? counts_at(va, vc) : counts_at(vc, va);
            };
            double prev_vc = across.lo;
            std::array<int, 6> prev = at(prev_vc);
            for (int t = 1; t <= n_across; ++t) {
                const double vc = across.lo + (across.hi - across.lo) * t / n_across;
                const std::array<int, 6> cur = at(vc);
                for (std::size_t f = 0; f < kStarFamilies.size(); ++f) {
                    if (prev[f] >= 1 && cur[f] >= 1 && prev[f] != cur[f]) {
                        double lo = prev_vc, hi = vc;
                        const int count_lo = prev[f];
                        for (int it = 0; it < 25; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            (at(mid)[f] == count_lo ? lo : hi) = mid;
                        }
                        const double vcross = 0.5 * (lo + hi);
                        points[f].emplace_back(along_axis1 ? va : vcross,
                                               along_axis1 ? vcross : va);
                    }
                }
                prev = cur;
                prev_vc = vc;
            }
        }
    };
    sweep(true);
    sweep(false);

    for (std::size_t f = 0; f < kStarFamilies.size(); ++f) {
        if (points[f].size() < 2) continue;
        std::sort(points[f].begin(), points[f].end());
        BoundaryCurve curve;
        curve.name = "branch fold " + kStarFamilies[f].str();
        curve.points = std::move(points[f]);
        out.push_back(std::move(curve));
    }
}

}  // namespace

std::vector<BoundaryCurve> boundary_curves(const RegionGrid& grid, const ModelParams& base) {
    const AxisSpec& a1 = grid.axis1;
    const AxisSpec& a2 = grid.axis2;
    const bool s1_on_1 = a1.axis == OperatingAxis::S1in;
    const bool s1_on_2 = a2.axis == OperatingAxis::S1in;
    const bool s2_on_1 = a1.axis == OperatingAxis::S2in;
    const bool s2_on_2 = a2.axis == OperatingAxis::S2in;
    if (!(s1_on_1 || s1_on_2 || s2_on_1 || s2_on_2)) {
        throw std::invalid_argument(
            "boundary_curves: at least one axis must be a feed concentration (S1in or S2in)");
    }

    std::vector<BoundaryCurve> out;

    // Loci with S1in as the critical coordinate.
    if (s1_on_1 || s1_on_2) {
        const AxisSpec& s_axis = s1_on_1 ? a1 : a2;
        const AxisSpec& other = s1_on_1 ? a2 : a1;
        const OperatingAxis other_axis = other.axis;
        auto trace = [&](const std::string& name, auto&& eval) {
            trace_curve(out, name, s1_on_1, s_axis, other, base, other_axis, eval);
        };
        for (int tier = 1; tier <= 2; ++tier) {
            trace("S1in = lambda1^" + std::to_string(tier), [tier](const ModelParams& p) {
                return lambda1(p.mu1, p.D, p.r, p.alpha, tier).low;
            });
            for (int j = 1; j <= 2; ++j) {
                trace("S1in = F" + std::to_string(tier) + std::to_string(j),
                      [tier, j](const ModelParams& p) { return aux_F(p, tier, j); });
            }
        }
        // phi_j = 0 in terms of S1in requires inverting the lemma-1 root;
        // scan the S1in axis once per sample instead.
        for (int j = 1; j <= 2; ++j) {
            trace("phi" + std::to_string(j) + " = 0", [j, &s_axis](const ModelParams& p) {
                const BreakEven l1 = lambda1(p.mu1, p.D, p.r, p.alpha, 1);
                if (!l1.finite()) return std::numeric_limits<double>::quiet_NaN();
                auto phi_at = [&](double s1) {
                    const ModelParams q = p.with(p.D, p.r, s1, p.S2in);
                    return aux_phi(q, j, lemma1_x12(q));
                };
                const double lo = std::max(s_axis.lo, l1.low * (1.0 + 1e-9));
                if (!(lo < s_axis.hi)) return std::numeric_limits<double>::quiet_NaN();
                const double flo = phi_at(lo);
                const double fhi = phi_at(s_axis.hi);
                if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0)) {
                    return std::numeric_limits<double>::quiet_NaN();
                }
                return detail::bisect(phi_at, lo, s_axis.hi).x;
            });
        }
    }

    // Loci with S2in as the critical coordinate.
    if (s2_on_1 || s2_on_2) {
        const AxisSpec& s_axis = s2_on_1 ? a1 : a2;
        const AxisSpec& other = s2_on_1 ? a2 : a1;
        const OperatingAxis other_axis = other.axis;
        auto trace = [&](const std::string& name, auto&& eval) {
            trace_curve(out, name, s2_on_1, s_axis, other, base, other_axis, eval);
        };
        for (int tier = 1; tier <= 2; ++tier) {
            for (int j = 1; j <= 2; ++j) {
                trace("S2in = lambda2^" + std::to_string(tier) + std::to_string(j),
                      [tier, j](const ModelParams& p) {
                          const BreakEven l2 = lambda2(p.mu2, p.D, p.r, p.alpha, tier);
                          return j == 1 ? l2.low : l2.high;
                      });
            }
        }
        for (int j = 1; j <= 2; ++j) {
            // S2in + k2/k1 (S1in - lambda1^1) = lambda2^{1j}
            trace("S2in = lambda2^1" + std::to_string(j) + " - k2/k1 (S1in - lambda1^1)",
                  [j](const ModelParams& p) {
                      const BreakEven l1 = lambda1(p.mu1, p.D, p.r, p.alpha, 1);
                      const BreakEven l2 = lambda2(p.mu2, p.D, p.r, p.alpha, 1);
                      const double lam2 = j == 1 ? l2.low : l2.high;
                      if (!l1.finite() || !std::isfinite(lam2)) {
                          return std::numeric_limits<double>::quiet_NaN();
                      }
                      return lam2 - (p.k2 / p.k1) * (p.S1in - l1.low);
                  });
            // S2in + k2/k1 (S1in - lambda1^2) = lambda2^{2j}
            trace("S2in = lambda2^2" + std::to_string(j) + " - k2/k1 (S1in - lambda1^2)",
                  [j](const ModelParams& p) {
                      const BreakEven l1 = lambda1(p.mu1, p.D, p.r, p.alpha, 2);
                      const BreakEven l2 = lambda2(p.mu2, p.D, p.r, p.alpha, 2);
                      const double lam2 = j == 1 ? l2.low : l2.high;
                      if (!l1.finite() || !std::isfinite(lam2)) {
                          return std::numeric_limits<double>::quiet_NaN();
                      }
                      return lam2 - (p.k2 / p.k1) * (p.S1in - l1.low);
                  });
            // phi_j = 0: S2in = lambda2^{2j} - alpha k2 X1^{2*}(S1in)
            trace("S2in: phi" + std::to_string(j) + " = 0", [j](const ModelParams& p) {
                const BreakEven l2 = lambda2(p.mu2, p.D, p.r, p.alpha, 2);
                const double lam2 = j == 1 ? l2.low : l2.high;
                if (!std::isfinite(lam2)) return std::numeric_limits<double>::quiet_NaN();
                const double x12 = lemma1_x12(p);
                if (!std::isfinite(x12)) return std::numeric_limits<double>::quiet_NaN();
                return lam2 - p.alpha * p.k2 * x12;
            });
        }
    }

    trace_fold_curves(out, grid, base);
    return out;
}

std::vector<std::pair<int, int>> hopf_map(const RegionGrid& grid) {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < grid.axis2.n; ++j) {
        for (int i = 0; i < grid.axis1.n; ++i) {
            if (grid.at(i, j).hopf) out.emplace_back(i, j);
        }
    }
    return out;
}

}  // namespace am2
