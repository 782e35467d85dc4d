#include "am2/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "am2/check.hpp"
#include "am2/simulate.hpp"
#include "am2/stability.hpp"

namespace am2 {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

PropertyResult residual_property(const ModelParams& base, std::uint64_t seed, int draws) {
    check::Rng rng(seed ^ 0x01);
    double worst = 0.0;
    int count = 0;
    for (int d = 0; d < draws; ++d) {
        const ModelParams p = check::random_params(rng, base);
        for (const auto& e : enumerate_all(p)) {
            if (!e.exists) continue;
            worst = std::max(worst, residual(p, e));
            ++count;
        }
    }
    PropertyResult res;
    res.name = "equilibrium-residuals";
    res.pass = worst <= 1e-10;
    res.details = std::to_string(count) + " equilibria, max |rhs| = " + fmt(worst);
    return res;
}

PropertyResult jacobian_property(const ModelParams& base, std::uint64_t seed, int draws) {
    check::Rng rng(seed ^ 0x02);
    double worst = 0.0;
    bool sparsity_ok = true;
    for (int d = 0; d < draws; ++d) {
        const ModelParams p = check::random_params(rng, base);
        SystemState x;
        for (std::size_t i = 0; i < kStateDim; ++i) x[i] = rng.uniform(0.05, 20.0);
        const Jacobian ja = jacobian(p, x);
        const Jacobian jf = check::fd_jacobian(p, x);
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) {
                const double err = std::abs(ja(r, c) - jf(r, c)) / std::max(1.0, std::abs(ja(r, c)));
                worst = std::max(worst, err);
                if (!Jacobian::structural(r, c) && ja(r, c) != 0.0) sparsity_ok = false;
            }
        }
    }
    PropertyResult res;
    res.name = "jacobian-fd";
    res.pass = worst <= 1e-6 && sparsity_ok;
    res.details = "max relative entry error = " + fmt(worst) +
                  (sparsity_ok ? ", sparsity exact" : ", SPARSITY VIOLATED");
    return res;
}

PropertyResult eigenvalue_property(const ModelParams& base, std::uint64_t seed, int draws) {
    check::Rng rng(seed ^ 0x03);
    double worst_coeff = 0.0;
    double worst_eig = 0.0;
    int checked = 0;
    for (int d = 0; d < draws; ++d) {
        const ModelParams p = check::random_params(rng, base);
        for (const auto& e : enumerate_all(p)) {
            if (!e.exists) continue;
            const Jacobian J = jacobian(p, e.state);
            const auto blocks = diagonal_blocks(J);
            worst_coeff = std::max(worst_coeff, check::resolvent_determinant_mismatch(J));
            for (const auto& b : blocks) {
                for (const auto& lam : {b.eig1, b.eig2}) {
                    const auto pair = check::eigenpair_near(J, lam);
                    const double scale = std::max(1.0, std::abs(lam));
                    worst_eig = std::max(worst_eig, std::abs(pair.value - lam) / scale);
                    worst_eig = std::max(worst_eig, pair.residual / scale);
                }
            }
            ++checked;
        }
    }
    PropertyResult res;
    res.name = "eigenvalue-oracle";
    res.pass = worst_coeff <= 1e-8 && worst_eig <= 1e-8;
    res.details = std::to_string(checked) + " equilibria, char-poly error = " + fmt(worst_coeff) +
                  ", eigenpair error = " + fmt(worst_eig);
    return res;
}

PropertyResult lemma_property(const ModelParams& base, std::uint64_t seed, int draws) {
    check::Rng rng(seed ^ 0x04);
    int lemma1_checked = 0;
    int lemma2_checked = 0;
    std::string failure;
    for (int d = 0; d < draws && failure.empty(); ++d) {
        const ModelParams p = check::random_params(rng, base);
        const auto uppers = upper_equilibria(p);
        if (uppers[1].exists) {
            const AuxFunctions a = make_aux(p, uppers[1].x11, uppers[1].s21, uppers[1].x21, 0.0);
            const double hi = p.S1in / (p.alpha * p.k1);
            const int changes = check::count_sign_changes(
                [&](double x) { return a.f1(x) - a.g1(x); }, uppers[1].x11, hi, 10000);
            if (changes != 1) {
                failure = "f1 - g1 has " + std::to_string(changes) + " sign changes";
            }
            ++lemma1_checked;
        }
        for (const auto& u : uppers) {
            const bool star = u.family == UpperFamily::E01 || u.family == UpperFamily::E02 ||
                              u.family == UpperFamily::E11 || u.family == UpperFamily::E12;
            if (!star || !u.exists) continue;
            double x12 = 0.0;
            if (u.family == UpperFamily::E11 || u.family == UpperFamily::E12) {
                x12 = solve_x12(p, u);
            }
            const X22Roots rr = solve_x22_all(p, u, x12);
            if (rr.roots.empty()) {
                failure = std::string("no f2 = g2 root for upper ") + to_string(u.family);
                break;
            }
            if (rr.roots.size() % 2 == 0 && !rr.tangency) {
                failure = "even root count without tangency flag";
                break;
            }
            for (std::size_t i = 0; i < rr.roots.size(); ++i) {
                if (!(rr.roots[i] > u.x21 && rr.roots[i] < rr.d)) {
                    failure = "root outside (X2^1, d)";
                    break;
                }
                if (i > 0 && !(rr.roots[i] > rr.roots[i - 1])) {
                    failure = "roots not strictly ordered";
                    break;
                }
            }
            // The last crossing sits past the f2 maximum whenever f2 still
            // dominates g2 there.
            const AuxFunctions a = make_aux(p, u.x11, u.s21, u.x21, x12);
            if (failure.empty() && rr.x2m > u.x21 && rr.x2m < rr.d &&
                a.f2(rr.x2m) - a.g2(rr.x2m) > 0.0 && !(rr.roots.back() > rr.x2m)) {
                failure = "last root not beyond the f2 maximum";
            }
            ++lemma2_checked;
        }
    }
    PropertyResult res;
    res.name = "lemma-root-structure";
    res.pass = failure.empty();
    res.details = failure.empty()
                      ? std::to_string(lemma1_checked) + " lemma-1 and " +
                            std::to_string(lemma2_checked) + " lemma-2 instances"
                      : failure;
    return res;
}

PropertyResult agreement_property(const ModelParams& base, std::uint64_t seed, int draws) {
    check::Rng rng(seed ^ 0x05);
    int classified = 0;
    int marginal = 0;
    std::string failure;
    for (int d = 0; d < draws && failure.empty(); ++d) {
        const ModelParams p = check::random_params(rng, base);
        for (const auto& ce : classify_all(p)) {
            if (!ce.verdict) continue;
            ++classified;
            if (ce.verdict->numeric == Verdict::Marginal ||
                ce.verdict->table == Verdict::Marginal) {
                ++marginal;
                continue;
            }
            if (!ce.verdict->agreement) {
                failure = "verdict disagreement at " + ce.eq.label.str();
                break;
            }
            if (ce.eq.label.unstable_branch() && ce.verdict->numeric != Verdict::Unstable) {
                failure = "break-even-branch family " + ce.eq.label.str() + " not unstable";
                break;
            }
        }
    }
    PropertyResult res;
    res.name = "stability-agreement";
    res.pass = failure.empty();
    res.details = failure.empty() ? std::to_string(classified) + " verdicts (" +
                                        std::to_string(marginal) + " marginal skipped)"
                                  : failure;
    return res;
}

PropertyResult monitor_property(const ModelParams& base, std::uint64_t seed, int draws) {
    check::Rng rng(seed ^ 0x06);
    const int runs = std::min(draws, 10);
    std::size_t violations = 0;
    int trajectories = 0;
    for (int d = 0; d < runs; ++d) {
        const ModelParams p = check::random_params(rng, base);
        const auto w = omega_functionals(p, SystemState());
        SystemState x0;
        const double scale = (d % 2 == 0) ? 1.0 : 2.5;  // alternate inside/outside
        for (std::size_t i = 0; i < kStateDim; ++i) {
            x0[i] = rng.uniform(0.0, scale * w.bound1 / 4.0);
        }
        const Trajectory traj = integrate(p, x0, default_horizon(p), 1e-8, 1e-10);
        violations += monitor_invariants(traj, p).size();
        ++trajectories;
    }
    PropertyResult res;
    res.name = "invariant-monitors";
    res.pass = violations == 0;
    res.details = std::to_string(trajectories) + " trajectories, " +
                  std::to_string(violations) + " violations";
    return res;
}

}  // namespace

VerifyRun run_verification(const ModelParams& base, std::uint64_t seed, int draws) {
    VerifyRun run;
    run.seed = seed;
    run.draws = draws;
    if (draws == 0) {
        for (const char* name : {"equilibrium-residuals", "jacobian-fd", "eigenvalue-oracle",
                                 "lemma-root-structure", "stability-agreement",
                                 "invariant-monitors"}) {
            run.properties.push_back({name, true, "vacuous pass: zero draws requested"});
        }
        return run;
    }
    run.properties.push_back(residual_property(base, seed, draws));
    run.properties.push_back(jacobian_property(base, seed, draws));
    run.properties.push_back(eigenvalue_property(base, seed, std::max(1, draws / 5)));
    run.properties.push_back(lemma_property(base, seed, draws));
    run.properties.push_back(agreement_property(base, seed, draws));
    run.properties.push_back(monitor_property(base, seed, draws));
    return run;
}

std::string verify_report_json(const VerifyRun& run) {
    nlohmann::json root;
    root["seed"] = run.seed;
    root["draws"] = run.draws;
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : run.properties) {
        props.push_back({{"name", p.name}, {"pass", p.pass}, {"details", p.details}});
    }
    root["properties"] = props;
    root["all_pass"] = run.all_pass();
    return root.dump(2) + "\n";
}

}  // namespace am2
