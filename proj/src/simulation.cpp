#include "pension/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "pension/detail/parallel.hpp"
#include "pension/rng.hpp"
#include "pension/stats.hpp"

namespace pension {

void SimConfig::validate(const MarketParams& params) const {
    params.validate();
    if (n_paths < 1) throw std::invalid_argument("SimConfig: requires n_paths >= 1");
    if (n_steps < 1) throw std::invalid_argument("SimConfig: requires n_steps >= 1");
    if (!(t0 >= 0.0) || !(t0 <= params.T))
        throw std::invalid_argument("SimConfig: requires 0 <= t0 <= T");
    if (!(s0 > 0.0)) throw std::invalid_argument("SimConfig: requires s0 > 0");
}

WealthStep wealth_step(const StatePoint& state, const PolicyDecision& decision,
                       double dt, double z, const MarketParams& params,
                       Stepper stepper) {
    if (!(dt > 0.0)) throw std::domain_error("wealth_step: requires dt > 0");
    if (!(state.s > 0.0)) throw std::domain_error("wealth_step: requires s > 0");
    double s_next = stepper == Stepper::Exact
                        ? ou_exact_step(state.s, dt, z, params)
                        : ou_euler_step(state.s, dt, z, params);
    bool floored = false;
    const double floor = params.price_floor();
    if (s_next < floor) {
        s_next = floor;
        floored = true;
    }
    // One Brownian driver: the realized price increment feeds the wealth, so
    // the asset and wealth paths are exactly consistent.
    const double v_next = state.v +
                          (params.r * decision.b - params.R * decision.l + params.c) * dt +
                          decision.y * (s_next - state.s) / state.s;
    return {s_next, v_next, floored};
}

PolicyDecision capped_optimal_policy(const StatePoint& state,
                                     const MarketParams& params) {
    const double w = state.v - params.c * state.t;
    if (w < 0.0) return {0.0, -w, 0.0, Regime::Borrow, {}};
    double y = candidate_allocation(state.t, state.s, state.v, params.r, params);
    if (y < 0.0) y = 0.0;
    if (y >= w) return {w, 0.0, 0.0, Regime::Constrained, {}};
    return {y, 0.0, w - y, Regime::Deposit, {}};
}

namespace {

struct PathOutcome {
    double terminal = 0.0;
    std::array<long, 3> regime_counts{};
    long floor_hits = 0;
    long clip_events = 0;
};

void check_admissible(const PolicyDecision& d, const StatePoint& state,
                      const MarketParams& params, long path, long step) {
    const auto fail = [&](const char* what) {
        std::ostringstream msg;
        msg << "simulate_paths: " << what << " at path " << path << ", step "
            << step << " (y=" << d.y << ", l=" << d.l << ", b=" << d.b << ")";
        throw std::runtime_error(msg.str());
    };
    if (!(d.l >= 0.0)) fail("negative loan");
    if (!(d.b >= 0.0)) fail("negative deposit");
    if (d.l > 0.0 && d.b > 0.0) fail("loan and deposit simultaneously positive");
    const double w = state.v - params.c * state.t;
    const double gap = (d.b + d.y - d.l) - w;
    if (!(std::abs(gap) <= 1e-9 * std::max(1.0, std::abs(state.v))))
        fail("budget identity violated");
}

std::vector<PathOutcome> run_paths(const PolicyFn& policy, const SimConfig& config,
                                   const MarketParams& params) {
    config.validate(params);
    std::vector<PathOutcome> out(static_cast<std::size_t>(config.n_paths));

    if (config.t0 == params.T) {  // degenerate zero-evolution run
        for (auto& o : out) o.terminal = config.v0;
        return out;
    }

    const long n_steps = config.n_steps;
    const double dt = (params.T - config.t0) / static_cast<double>(n_steps);

    detail::parallel_for_paths(config.n_paths, config.threads, [&](long begin, long end) {
        std::normal_distribution<double> normal;
        for (long p = begin; p < end; ++p) {
            auto eng = path_engine(config.seed, static_cast<std::uint64_t>(p));
            normal.reset();
            PathOutcome& o = out[static_cast<std::size_t>(p)];
            StatePoint state{config.t0, config.s0, config.v0};
            for (long j = 0; j < n_steps; ++j) {
                state.t = config.t0 + static_cast<double>(j) * dt;
                const PolicyDecision d = policy(state);
                check_admissible(d, state, params, p, j);
                ++o.regime_counts[static_cast<std::size_t>(d.regime)];
                for (PolicyWarning w : d.warnings)
                    if (w == PolicyWarning::Clipped) ++o.clip_events;
                const double z = normal(eng);
                const WealthStep step = wealth_step(state, d, dt, z, params, config.stepper);
                if (step.floored) ++o.floor_hits;
                state.s = step.s_next;
                state.v = step.v_next;
            }
            o.terminal = state.v;
        }
    });
    return out;
}

}  // namespace

PathStats simulate_paths(const PolicyFn& policy, const SimConfig& config,
                         const MarketParams& params,
                         std::vector<double>* terminal_out) {
    const auto outcomes = run_paths(policy, config, params);
    const long n = config.n_paths;

    std::vector<double> terminal(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) terminal[i] = outcomes[i].terminal;
    if (terminal_out != nullptr) *terminal_out = terminal;

    PathStats stats;
    const MeanVar tw = mean_variance(terminal);
    stats.mean_terminal_wealth = tw.mean;
    stats.var_terminal_wealth = tw.variance;

    bool log_ok = true;
    for (double v : terminal)
        if (!(v > 0.0)) log_ok = false;
    if (log_ok) {
        std::vector<double> logs(terminal.size());
        for (std::size_t i = 0; i < terminal.size(); ++i) logs[i] = std::log(terminal[i]);
        const MeanVar lw = mean_variance(logs);
        stats.mean_log_terminal_wealth = lw.mean;
        stats.se_log_terminal_wealth = std::sqrt(lw.variance / static_cast<double>(n));
    } else {
        stats.mean_log_terminal_wealth = std::numeric_limits<double>::quiet_NaN();
        stats.se_log_terminal_wealth = std::numeric_limits<double>::quiet_NaN();
    }

    std::array<long, 3> counts{};
    long floor_hits = 0;
    long clips = 0;
    for (const auto& o : outcomes) {
        for (std::size_t i = 0; i < 3; ++i) counts[i] += o.regime_counts[i];
        floor_hits += o.floor_hits;
        clips += o.clip_events;
    }
    long decisions = 0;
    for (long cnt : counts) decisions += cnt;
    for (std::size_t i = 0; i < 3; ++i)
        stats.regime_occupancy[i] =
            decisions > 0 ? static_cast<double>(counts[i]) / static_cast<double>(decisions) : 0.0;
    stats.floor_hits = floor_hits;
    stats.clip_events = clips;
    return stats;
}

LogUtilityEstimate expected_log_utility(const PolicyFn& policy, const SimConfig& config,
                                        const MarketParams& params) {
    const auto outcomes = run_paths(policy, config, params);

    std::vector<long> offending;
    for (long i = 0; i < config.n_paths; ++i)
        if (!(outcomes[static_cast<std::size_t>(i)].terminal > 0.0)) offending.push_back(i);
    if (!offending.empty()) {
        std::ostringstream msg;
        msg << "expected_log_utility: nonpositive terminal wealth on " << offending.size()
            << " of " << config.n_paths << " paths:";
        for (std::size_t i = 0; i < offending.size() && i < 8; ++i) msg << ' ' << offending[i];
        if (offending.size() > 8) msg << " ...";
        throw std::domain_error(msg.str());
    }

    std::vector<double> logs(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) logs[i] = std::log(outcomes[i].terminal);
    const MeanVar lw = mean_variance(logs);
    return {lw.mean, std::sqrt(lw.variance / static_cast<double>(config.n_paths))};
}

}  // namespace pension
