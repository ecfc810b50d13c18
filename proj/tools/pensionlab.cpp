// pensionlab — command-line surface over the pension library.
//
// Subcommands:
//   policy    evaluate the closed-form allocation at one state
//   simulate  Monte Carlo of the coupled (price, wealth) system
//   sweep     one-parameter scans of the allocation, CSV output
//   verify    run the verification suite, JSON report
//
// Exit codes: 0 success, 1 check/runtime failure, 2 usage or config error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pension/config.hpp"
#include "pension/json_io.hpp"
#include "pension/sweep.hpp"
#include "pension/verification.hpp"
#include "pension/verify_harness.hpp"

namespace {

struct PolicyArgs {
    std::string config;
    double t = 0.0, s = 0.0, v = 0.0;
};

struct SimulateArgs {
    std::string config;
    std::optional<long> paths, steps;
    std::optional<double> t0, s0, v0;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> stepper;
    std::string policy = "optimal";
    std::string csv_path;
};

struct SweepArgs {
    std::string config;
    std::string preset;
    std::string param;
    std::optional<double> from, to;
    std::optional<long> points;
    std::optional<double> t, s, v;
    std::string out;
};

struct VerifyArgs {
    std::string config;
    bool full = false;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> v0;
};

int run_policy(const PolicyArgs& args) {
    const pension::ParsedConfig cfg = pension::parse_config_file(args.config);
    const pension::PolicyDecision decision =
        pension::optimal_policy({args.t, args.s, args.v}, cfg.params);
    std::cout << pension::decision_to_json(decision) << "\n";
    return 0;
}

int run_simulate(const SimulateArgs& args) {
    const pension::ParsedConfig cfg = pension::parse_config_file(args.config);
    pension::SimConfig sim;
    sim.n_paths = args.paths.value_or(cfg.sim.n_paths);
    sim.n_steps = args.steps.value_or(cfg.sim.n_steps);
    sim.t0 = args.t0.value_or(cfg.sim.t0);
    sim.s0 = args.s0.value_or(cfg.sim.s0);
    sim.seed = args.seed.value_or(cfg.sim.seed);
    sim.threads = args.threads.value_or(cfg.sim.threads);
    sim.stepper = cfg.sim.stepper;
    if (args.stepper) {
        if (*args.stepper == "exact")
            sim.stepper = pension::Stepper::Exact;
        else if (*args.stepper == "euler")
            sim.stepper = pension::Stepper::Euler;
        else
            throw std::invalid_argument("simulate: --stepper must be exact or euler");
    }
    if (args.v0)
        sim.v0 = *args.v0;
    else if (cfg.sim.v0)
        sim.v0 = *cfg.sim.v0;
    else
        throw std::invalid_argument(
            "config: v0 required (config key \"v0\" or --v0): no published default exists");

    const pension::MarketParams params = cfg.params;
    pension::PolicyFn policy;
    if (args.policy == "optimal") {
        policy = [params](const pension::StatePoint& state) {
            return pension::optimal_policy(state, params);
        };
    } else if (args.policy == "capped") {
        policy = [params](const pension::StatePoint& state) {
            return pension::capped_optimal_policy(state, params);
        };
    } else if (args.policy == "flat") {
        // everything in the bank
        policy = [params](const pension::StatePoint& state) -> pension::PolicyDecision {
            const double w = state.v - params.c * state.t;
            if (w < 0.0) return {0.0, -w, 0.0, pension::Regime::Borrow, {}};
            return {0.0, 0.0, w, pension::Regime::Deposit, {}};
        };
    } else {
        throw std::invalid_argument("simulate: --policy must be optimal, capped or flat");
    }

    std::vector<double> terminals;
    const pension::PathStats stats = pension::simulate_paths(
        policy, sim, params, args.csv_path.empty() ? nullptr : &terminals);

    if (!args.csv_path.empty()) {
        std::ofstream csv(args.csv_path, std::ios::binary);
        if (!csv)
            throw std::runtime_error("simulate: cannot open \"" + args.csv_path + "\"");
        csv << "path,terminal_wealth,log_terminal_wealth\n";
        char buf[96];
        for (std::size_t p = 0; p < terminals.size(); ++p) {
            const double w = terminals[p];
            std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g\n", p, w,
                          w > 0.0 ? std::log(w) : std::numeric_limits<double>::quiet_NaN());
            csv << buf;
        }
        if (!csv) throw std::runtime_error("simulate: write failed for \"" + args.csv_path + "\"");
    }

    std::cout << pension::path_stats_to_json(stats) << "\n";
    return 0;
}

int run_sweep_cmd(const SweepArgs& args) {
    const pension::ParsedConfig cfg = pension::parse_config_file(args.config);
    pension::SweepSpec spec{};
    pension::MarketParams params = cfg.params;

    if (!args.preset.empty()) {
        const pension::SweepPreset preset = pension::parse_preset_name(args.preset);
        const pension::PresetSweep ps =
            pension::make_preset(preset, cfg.params, args.s.value_or(cfg.sim.s0),
                                 args.v, args.from, args.to,
                                 args.points.value_or(50));
        spec = ps.spec;
        params = ps.params;
        if (args.t) spec.fixed_state.t = *args.t;
    } else {
        if (args.param.empty())
            throw std::invalid_argument("sweep: requires --preset or --param");
        spec.parameter = pension::parse_sweep_param(args.param);
        if (!args.from || !args.to)
            throw std::invalid_argument("sweep: requires --from and --to");
        spec.from = *args.from;
        spec.to = *args.to;
        if (!args.points) throw std::invalid_argument("sweep: requires --points");
        spec.points = *args.points;
        if (!args.t && spec.parameter != pension::SweepParam::T)
            throw std::invalid_argument("sweep: requires --t (fixed state time)");
        if (!args.v && spec.parameter != pension::SweepParam::V)
            throw std::invalid_argument("sweep: requires --v (fixed state wealth)");
        spec.fixed_state.t = args.t.value_or(0.0);
        spec.fixed_state.s = args.s.value_or(cfg.sim.s0);
        spec.fixed_state.v = args.v.value_or(0.0);
    }

    const auto rows = pension::run_sweep(spec, params);
    pension::emit_csv_file(rows, args.out);
    return 0;
}

int run_verify_cmd(const VerifyArgs& args) {
    const pension::ParsedConfig cfg = pension::parse_config_file(args.config);
    pension::SimDefaults sim = cfg.sim;
    if (args.seed) sim.seed = *args.seed;
    if (args.threads) sim.threads = *args.threads;
    if (args.v0) sim.v0 = *args.v0;
    const pension::VerifyReport report = pension::run_verify(
        cfg.params, sim,
        args.full ? pension::VerifyBudget::Full : pension::VerifyBudget::Quick);
    std::cout << pension::verify_report_to_json(report) << "\n";
    return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form pension allocation under a deposit-loan spread "
                 "and a mean-reverting risky asset"};
    app.require_subcommand(1);

    PolicyArgs policy_args;
    CLI::App* policy = app.add_subcommand("policy", "Evaluate the optimal allocation at one state");
    policy->add_option("--config", policy_args.config, "JSON configuration file")->required();
    policy->add_option("--t", policy_args.t, "time")->required();
    policy->add_option("--s", policy_args.s, "risky-asset price")->required();
    policy->add_option("--v", policy_args.v, "pension wealth")->required();

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo of the wealth process");
    simulate->add_option("--config", sim_args.config, "JSON configuration file")->required();
    simulate->add_option("--paths", sim_args.paths, "number of paths");
    simulate->add_option("--steps", sim_args.steps, "steps per path");
    simulate->add_option("--seed", sim_args.seed, "RNG seed");
    simulate->add_option("--t0", sim_args.t0, "start time");
    simulate->add_option("--s0", sim_args.s0, "start price");
    simulate->add_option("--v0", sim_args.v0, "start wealth");
    simulate->add_option("--stepper", sim_args.stepper, "price stepper: exact|euler");
    simulate->add_option("--policy", sim_args.policy,
                         "optimal|capped|flat (default optimal; the optimal policy "
                         "errors if a path exits its effective-wealth domain)");
    simulate->add_option("--threads", sim_args.threads, "worker threads (0 = auto)");
    simulate->add_option("--csv", sim_args.csv_path, "write per-path terminals as CSV");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "One-parameter scan of the allocation");
    sweep->add_option("--config", sweep_args.config, "JSON configuration file")->required();
    sweep->add_option("--preset", sweep_args.preset, "fig1|fig2|fig3|fig5");
    sweep->add_option("--param", sweep_args.param, "sigma|v|R|s|t");
    sweep->add_option("--from", sweep_args.from, "range start");
    sweep->add_option("--to", sweep_args.to, "range end");
    sweep->add_option("--points", sweep_args.points, "grid size");
    sweep->add_option("--t", sweep_args.t, "fixed state time");
    sweep->add_option("--s", sweep_args.s, "fixed state price (default: config s0)");
    sweep->add_option("--v", sweep_args.v, "fixed state wealth");
    sweep->add_option("--out", sweep_args.out, "output CSV path")->required();

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
    verify->add_option("--config", verify_args.config, "JSON configuration file")->required();
    verify->add_flag("--full", verify_args.full, "include the Monte Carlo checks");
    verify->add_option("--seed", verify_args.seed, "RNG seed");
    verify->add_option("--threads", verify_args.threads, "worker threads (0 = auto)");
    verify->add_option("--v0", verify_args.v0, "perturbation-test start wealth");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (policy->parsed()) return run_policy(policy_args);
        if (simulate->parsed()) return run_simulate(sim_args);
        if (sweep->parsed()) return run_sweep_cmd(sweep_args);
        if (verify->parsed()) return run_verify_cmd(verify_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
