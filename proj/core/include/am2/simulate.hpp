#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "am2/equilibria.hpp"

namespace am2 {

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    int n_samples = 512;       // evenly spaced output times, t = 0 included
    double h_fixed = 0.0;      // > 0 disables adaptivity (testing hook)
    std::size_t max_steps = 10'000'000;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SystemState> states;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double max_error_estimate = 0.0;  // largest accepted scaled error
    bool stiffness_failure = false;   // step size underflow; trajectory is partial
    double failure_time = 0.0;
    double rtol = 0.0, atol = 0.0;    // tolerances the run used

    const SystemState& final_state() const { return states.back(); }
};

/// Integrates the cascade from x0 to t_end with an embedded 4(5)
/// Runge-Kutta pair under PI step control. Small negative undershoots are
/// clamped to zero before the growth laws are evaluated; the stored states
/// keep the raw values. On step-size underflow the partial trajectory is
/// returned with stiffness_failure set.
Trajectory integrate(const ModelParams& p, const SystemState& x0, double t_end,
                     const IntegratorOptions& opts = {});
Trajectory integrate(const ModelParams& p, const SystemState& x0, double t_end,
                     double rtol, double atol);

struct ConvergenceReport {
    std::optional<std::string> target;     // label of the attributed equilibrium
    std::optional<std::size_t> target_index;
    double final_distance = std::numeric_limits<double>::infinity();
    bool tail_monotone = false;
};

/// Attributes the trajectory end point to the nearest existing equilibrium
/// when the final distance is within tol and the last tenth of the
/// trajectory approaches it monotonically.
ConvergenceReport attribute_convergence(const Trajectory& traj,
                                        const std::vector<Equilibrium>& eqs, double tol);

struct InvariantViolation {
    double t;
    std::string kind;   // "negativity", "omega-bound", "gronwall"
    double value;
    double bound;
};

/// Scans a trajectory for negative components beyond integrator noise and
/// for mass totals escaping their invariant-region bounds or decaying
/// envelopes.
std::vector<InvariantViolation> monitor_invariants(const Trajectory& traj, const ModelParams& p);

/// Euclidean distance between two states.
double state_distance(const SystemState& a, const SystemState& b);

/// Default integration horizon: 200 dimensionless units of 1/D.
inline double default_horizon(const ModelParams& p) { return 200.0 / p.D; }

}  // namespace am2
