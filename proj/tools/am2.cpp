// Command-line front end: enumerate equilibria, simulate trajectories, map
// operating diagrams, or run the randomized verification suite, all driven
// by one JSON run configuration.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "am2/config.hpp"
#include "am2/io.hpp"
#include "am2/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiagnostic = 3;
constexpr int kExitStiffness = 4;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    int threads = 0;  // 0: resolve from AM2_THREADS, else 1
    std::optional<std::uint64_t> seed;
};

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("AM2_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

int cmd_equilibria(const am2::RunConfig& cfg) {
    const auto classified = am2::classify_all(cfg.params);
    const auto& dir = cfg.output.dir;
    if (cfg.output.csv) {
        am2::io::write_file(dir / "equilibria.csv", am2::io::equilibria_csv(cfg.params, classified));
    }
    if (cfg.output.json) {
        am2::io::write_file(dir / "equilibria.json", am2::io::equilibria_json(cfg.params, classified));
    }
    int existing = 0;
    bool diagnostic = false;
    for (const auto& ce : classified) {
        if (ce.eq.exists) ++existing;
        if (ce.verdict && !ce.verdict->agreement) {
            std::cerr << "diagnostic: numeric and closed-form verdicts disagree at "
                      << ce.eq.label.str() << "\n";
            diagnostic = true;
        }
    }
    std::cout << existing << " existing equilibria written to " << dir.string() << "\n";
    return diagnostic ? kExitDiagnostic : kExitOk;
}

int cmd_simulate(const am2::RunConfig& cfg) {
    if (!cfg.simulate) {
        std::cerr << "config error: simulate section with x0 is required\n";
        return kExitConfig;
    }
    const auto& sim = *cfg.simulate;
    am2::IntegratorOptions opts;
    opts.rtol = sim.rtol;
    opts.atol = sim.atol;
    opts.n_samples = sim.samples;
    const double t_end = sim.t_end.value_or(am2::default_horizon(cfg.params));

    const am2::Trajectory traj = am2::integrate(cfg.params, sim.x0, t_end, opts);
    const auto eqs = am2::enumerate_all(cfg.params);
    const auto report = am2::attribute_convergence(traj, eqs, 1e-6);
    const auto violations = am2::monitor_invariants(traj, cfg.params);

    const auto& dir = cfg.output.dir;
    if (cfg.output.csv) {
        am2::io::write_file(dir / "trajectory.csv", am2::io::trajectory_csv(traj));
    }
    if (cfg.output.json) {
        am2::io::write_file(dir / "simulation.json",
                            am2::io::simulation_report_json(cfg.params, traj, report, violations));
    }
    std::cout << "integrated to t = " << traj.times.back() << " ("
              << traj.accepted_steps << " steps, " << violations.size() << " invariant findings, "
              << "target = " << (report.target ? *report.target : "none") << ")\n";
    if (traj.stiffness_failure) {
        std::cerr << "stiffness failure at t = " << traj.failure_time
                  << "; partial trajectory written\n";
        return kExitStiffness;
    }
    return kExitOk;
}

int cmd_diagram(const am2::RunConfig& cfg, int threads) {
    if (!cfg.diagram) {
        std::cerr << "config error: diagram section with axis1/axis2 is required\n";
        return kExitConfig;
    }
    const auto grid = am2::scan(cfg.params, cfg.diagram->axis1, cfg.diagram->axis2, threads);
    std::vector<am2::BoundaryCurve> curves;
    try {
        curves = am2::boundary_curves(grid, cfg.params);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "note: no analytic overlay (" << ex.what() << ")\n";
    }
    const auto& dir = cfg.output.dir;
    if (cfg.output.csv) {
        am2::io::write_file(dir / "diagram.csv", am2::io::grid_csv(grid));
    }
    if (cfg.output.svg) {
        am2::io::write_file(dir / "diagram.svg", am2::io::grid_svg(grid, curves));
    }
    std::size_t failed = 0;
    for (const auto& c : grid.cells) {
        if (c.failed) ++failed;
    }
    std::cout << grid.cells.size() << " cells scanned (" << failed << " failed, "
              << am2::hopf_map(grid).size() << " Hopf candidates)\n";
    return kExitOk;
}

int cmd_verify(const am2::RunConfig& cfg, std::optional<std::uint64_t> seed_override) {
    const std::uint64_t seed = seed_override.value_or(cfg.verify.seed);
    const am2::VerifyRun run = am2::run_verification(cfg.params, seed, cfg.verify.draws);
    if (cfg.output.json) {
        am2::io::write_file(cfg.output.dir / "verify.json", am2::verify_report_json(run));
    }
    for (const auto& p : run.properties) {
        std::cout << (p.pass ? "[PASS] " : "[FAIL] ") << p.name << ": " << p.details << "\n";
    }
    return run.all_pass() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AM2 cascade analysis: steady states, stability, trajectories, operating diagrams"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    CliOptions opt;
    app.add_option("--config", opt.config_path, "run configuration (JSON)")->required();
    app.add_option("--out", opt.out_dir, "output directory (overrides config)");
    app.add_option("--threads", opt.threads, "worker threads (env AM2_THREADS as fallback)");
    std::uint64_t seed_flag = 0;
    auto* seed_opt = app.add_option("--seed", seed_flag, "seed override for verify draws");

    auto* sub_eq = app.add_subcommand("equilibria", "enumerate and classify every steady state");
    auto* sub_sim = app.add_subcommand("simulate", "integrate a trajectory with invariant monitoring");
    auto* sub_dia = app.add_subcommand("diagram", "scan an operating diagram over two parameters");
    auto* sub_ver = app.add_subcommand("verify", "run the randomized property suite");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) opt.seed = seed_flag;

    am2::RunConfig cfg = [&]() -> am2::RunConfig {
        try {
            return am2::load_config(opt.config_path);
        } catch (const std::exception& ex) {
            std::cerr << "config error: " << ex.what() << "\n";
            std::exit(kExitConfig);
        }
    }();
    if (!opt.out_dir.empty()) cfg.output.dir = opt.out_dir;

    try {
        if (sub_eq->parsed()) return cmd_equilibria(cfg);
        if (sub_sim->parsed()) return cmd_simulate(cfg);
        if (sub_dia->parsed()) return cmd_diagram(cfg, resolve_threads(opt.threads));
        if (sub_ver->parsed()) return cmd_verify(cfg, opt.seed);
    } catch (const am2::StructuralError& ex) {
        std::cerr << "diagnostic error: " << ex.what() << "\n";
        return kExitDiagnostic;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitDiagnostic;
    }
    return kExitOk;
}
