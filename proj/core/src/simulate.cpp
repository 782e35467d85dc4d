#include "am2/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace am2 {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

Vec8 clamped_rhs(const ModelParams& p, const Vec8& y) {
    SystemState x;
    for (std::size_t i = 0; i < kStateDim; ++i) x[i] = std::max(y[i], 0.0);
    return rhs(p, x);
}

Vec8 axpy(const Vec8& y, double h, std::initializer_list<std::pair<double, const Vec8*>> terms) {
    Vec8 out = y;
    for (const auto& [c, k] : terms) {
        for (std::size_t i = 0; i < kStateDim; ++i) out[i] += h * c * (*k)[i];
    }
    return out;
}

}  // namespace

double state_distance(const SystemState& a, const SystemState& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < kStateDim; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Trajectory integrate(const ModelParams& p, const SystemState& x0, double t_end,
                     double rtol, double atol) {
    IntegratorOptions opts;
    opts.rtol = rtol;
    opts.atol = atol;
    return integrate(p, x0, t_end, opts);
}

Trajectory integrate(const ModelParams& p, const SystemState& x0, double t_end,
                     const IntegratorOptions& opts) {
    for (double c : x0.v) {
        if (!(c >= 0.0)) throw std::invalid_argument("integrate: initial state must be nonnegative");
    }
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (!(opts.rtol > 0.0 && opts.rtol <= 1e-2) || !(opts.atol > 0.0 && opts.atol <= 1e-2)) {
        throw std::invalid_argument("integrate: tolerances must lie in (0, 1e-2]");
    }
    if (opts.n_samples < 2) throw std::invalid_argument("integrate: need at least 2 samples");

    Trajectory traj;
    traj.rtol = opts.rtol;
    traj.atol = opts.atol;
    traj.times.reserve(static_cast<std::size_t>(opts.n_samples));
    traj.states.reserve(static_cast<std::size_t>(opts.n_samples));
    traj.times.push_back(0.0);
    traj.states.push_back(x0);

    Vec8 y = x0.v;
    double t = 0.0;
    Vec8 k1 = clamped_rhs(p, y);

    // Initial step from the usual rate-of-change heuristic.
    double h;
    if (opts.h_fixed > 0.0) {
        h = opts.h_fixed;
    } else {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < kStateDim; ++i) {
            const double sc = opts.atol + opts.rtol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(k1[i]) / sc);
        }
        h = (d1 > 1e-12) ? 0.01 * d0 / d1 : 1e-6 * t_end;
        h = std::clamp(h, 1e-12 * t_end, 0.1 * t_end);
    }

    int next_sample = 1;
    double err_prev = 1.0;
    const double h_min = 1e-14 * std::max(1.0, t_end);

    while (t < t_end) {
        const double t_sample = t_end * next_sample / (opts.n_samples - 1);
        bool hit_sample = false;
        if (opts.h_fixed <= 0.0 && t + h >= t_sample - 1e-14 * t_end) {
            h = t_sample - t;
            hit_sample = true;
        } else if (opts.h_fixed > 0.0 && t + h >= t_end) {
            h = t_end - t;
        }

        const Vec8 k2 = clamped_rhs(p, axpy(y, h, {{kA21, &k1}}));
        const Vec8 k3 = clamped_rhs(p, axpy(y, h, {{kA31, &k1}, {kA32, &k2}}));
        const Vec8 k4 = clamped_rhs(p, axpy(y, h, {{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}));
        const Vec8 k5 = clamped_rhs(p, axpy(y, h, {{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}));
        const Vec8 k6 = clamped_rhs(p, axpy(y, h, {{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}));
        const Vec8 y5 = axpy(y, h, {{kB1, &k1}, {kB3, &k3}, {kB4, &k4}, {kB5, &k5}, {kB6, &k6}});
        const Vec8 k7 = clamped_rhs(p, y5);  // FSAL

        double err = 0.0;
        for (std::size_t i = 0; i < kStateDim; ++i) {
            const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                                  kE6 * k6[i] + kE7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / kStateDim);

        if (opts.h_fixed > 0.0 || err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;
            ++traj.accepted_steps;
            traj.max_error_estimate = std::max(traj.max_error_estimate, err);

            if (opts.h_fixed > 0.0) {
                // Fixed-step runs record every accepted step.
                traj.times.push_back(t);
                traj.states.push_back(SystemState(y));
                if (t >= t_end - 1e-12 * t_end) break;
            } else if (hit_sample) {
                traj.times.push_back(t);
                traj.states.push_back(SystemState(y));
                ++next_sample;
                if (next_sample >= opts.n_samples) break;
            }

            if (opts.h_fixed <= 0.0) {
                // PI controller on the scaled error.
                const double e = std::max(err, 1e-10);
                double fac = 0.9 * std::pow(e, -0.14) * std::pow(err_prev, 0.08);
                fac = std::clamp(fac, 0.2, 5.0);
                h = std::min(h * fac, 0.2 * t_end);
                err_prev = e;
            }
        } else {
            ++traj.rejected_steps;
            const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
        }

        if ((opts.h_fixed <= 0.0 && h < h_min) ||
            traj.accepted_steps + traj.rejected_steps > opts.max_steps) {
            traj.stiffness_failure = true;
            traj.failure_time = t;
            if (traj.times.back() < t) {
                traj.times.push_back(t);
                traj.states.push_back(SystemState(y));
            }
            break;
        }
    }
    return traj;
}

ConvergenceReport attribute_convergence(const Trajectory& traj,
                                        const std::vector<Equilibrium>& eqs, double tol) {
    ConvergenceReport report;
    if (traj.states.empty()) return report;
    const SystemState& last = traj.states.back();

    std::size_t best = eqs.size();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (!eqs[i].exists) continue;
        const double d = state_distance(last, eqs[i].state);
        if (d < report.final_distance) {
            report.final_distance = d;
            best = i;
        }
    }
    if (best == eqs.size() || report.final_distance > tol) return report;

    // The last tenth of the samples must approach the candidate; wobble
    // below a hundredth of the attribution tolerance is integrator noise.
    const double slack = std::max(traj.atol, 0.01 * tol);
    const std::size_t n = traj.states.size();
    const std::size_t tail = std::max<std::size_t>(2, n / 10);
    report.tail_monotone = true;
    double prev = state_distance(traj.states[n - tail], eqs[best].state);
    for (std::size_t i = n - tail + 1; i < n; ++i) {
        const double d = state_distance(traj.states[i], eqs[best].state);
        if (d > prev * (1.0 + 1e-6) + slack) {
            report.tail_monotone = false;
            break;
        }
        prev = d;
    }
    if (!report.tail_monotone) return report;

    report.target = eqs[best].label.str();
    report.target_index = best;
    return report;
}

std::vector<InvariantViolation> monitor_invariants(const Trajectory& traj, const ModelParams& p) {
    std::vector<InvariantViolation> out;
    if (traj.states.empty()) return out;

    const double neg_floor = -10.0 * traj.atol;
    const auto w0 = omega_functionals(p, traj.states.front());
    const double M1 = std::max(w0.z1, w0.bound1);
    const double z2_cap = std::max(w0.z2, M1 / p.alpha);
    const double aD1 = p.alpha * p.D1();
    const double aD2 = p.alpha * p.D2();

    for (std::size_t s = 0; s < traj.states.size(); ++s) {
        const double t = traj.times[s];
        const SystemState& x = traj.states[s];
        for (std::size_t i = 0; i < kStateDim; ++i) {
            if (x[i] < neg_floor) {
                out.push_back({t, "negativity", x[i], neg_floor});
            }
        }
        const auto w = omega_functionals(p, x);
        const double cap1 = std::max(w0.z1, w.bound1) * (1.0 + 1e-6);
        if (w.z1 > cap1) out.push_back({t, "omega-bound", w.z1, cap1});
        const double cap2 = z2_cap * (1.0 + 1e-6);
        if (w.z2 > cap2) out.push_back({t, "omega-bound", w.z2, cap2});

        // Decay envelopes of the mass totals.
        const double env1 = w.bound1 + (w0.z1 - w.bound1) * std::exp(-aD1 * t);
        const double slack1 = 1e-6 * std::max({1.0, w0.z1, w.bound1});
        if (w.z1 > env1 + slack1) out.push_back({t, "gronwall", w.z1, env1 + slack1});
        const double env2 = M1 / p.alpha + (w0.z2 - M1 / p.alpha) * std::exp(-aD2 * t);
        const double slack2 = 1e-6 * std::max({1.0, w0.z2, M1 / p.alpha});
        if (w.z2 > env2 + slack2) out.push_back({t, "gronwall", w.z2, env2 + slack2});
    }
    return out;
}

}  // namespace am2
