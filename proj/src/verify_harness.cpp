#include "pension/verify_harness.hpp"

#include <cmath>
#include <random>

#include "pension/rng.hpp"
#include "pension/verification.hpp"

namespace pension {

bool VerifyReport::all_passed() const {
    for (const auto& [name, result] : checks)
        if (!result.passed) return false;
    return true;
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return grid;
}

void add_check(VerifyReport& report, std::string name, CheckResult result) {
    report.checks.emplace_back(std::move(name), std::move(result));
}

}  // namespace

VerifyReport run_verify(const MarketParams& params, const SimDefaults& sim,
                        VerifyBudget budget) {
    params.validate();
    if (!(sim.s0 > 0.0)) throw std::invalid_argument("run_verify: requires s0 > 0");

    VerifyReport report;

    // Contribution ODE: solved exactly, residual at rounding level.
    for (const auto& [name, rate] :
         {std::pair<const char*, double>{"phi_ode_r", params.r},
          std::pair<const char*, double>{"phi_ode_R", params.R}}) {
        const auto grid = uniform_grid(0.0, params.T, 1000);
        const ResidualReport rr = phi_ode_residual(grid, rate, params);
        add_check(report, name,
                  {{{"max_abs", rr.max_abs}, {"boundary_abs", rr.boundary_abs}},
                   rr.passed && rr.boundary_abs <= 1e-15});
    }

    // Price PDE for the constant separation factor: identically zero.
    {
        const auto grid = uniform_grid(0.1 * params.theta, 3.0 * params.theta, 200);
        const ResidualReport rr = f_pde_residual(grid, params);
        add_check(report, "f_pde", {{{"max_abs", rr.max_abs}}, rr.passed});
    }

    // Grid Legendre transform of ln against the closed-form dual.
    {
        const auto x_grid = log_spaced_grid(1e-4, 1e4, 100000);
        const auto z_values = log_spaced_grid(0.1, 10.0, 50);
        double max_abs = 0.0;
        const auto log_fn = [](double x) { return std::log(x); };
        for (double z : z_values)
            max_abs = std::max(max_abs,
                               std::abs(legendre_transform(log_fn, x_grid, z) - log_dual(z)));
        add_check(report, "legendre_log_dual", {{{"max_abs", max_abs}}, max_abs <= 1e-6});
    }

    // Applying the transform twice recovers ln pointwise.
    {
        const auto x_grid = log_spaced_grid(1e-4, 1e4, 100000);
        const auto z_grid = log_spaced_grid(0.02, 20.0, 5000);
        const auto log_fn = [](double x) { return std::log(x); };
        const auto profile = legendre_profile(log_fn, x_grid, z_grid);
        double max_abs = 0.0;
        for (double x : uniform_grid(0.5, 5.0, 41))
            max_abs = std::max(max_abs,
                               std::abs(legendre_biconjugate(profile, z_grid, x) - std::log(x)));
        add_check(report, "legendre_biconjugate", {{{"max_abs", max_abs}}, max_abs <= 1e-5});
    }

    // Terminal conditions and the dual round trip over randomized inputs.
    {
        std::mt19937_64 eng(splitmix64(sim.seed ^ 0x7e51a1u));
        std::uniform_real_distribution<double> v_dist(0.5, 1500.0);
        std::uniform_real_distribution<double> z_dist(0.05, 20.0);
        std::uniform_real_distribution<double> t_dist(0.0, params.T);
        double vf_max = 0.0, dual_max = 0.0, round_max = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double rate = (i % 2 == 0) ? params.r : params.R;
            const double v = v_dist(eng);
            vf_max = std::max(vf_max, std::abs(value_function(params.T, v, rate, params) -
                                               std::log(v)) /
                                          std::abs(std::log(v)));
            const double z = z_dist(eng);
            dual_max = std::max(dual_max,
                                std::abs(dual_wealth(params.T, z, params) - 1.0 / z) / (1.0 / z));
            const double t = t_dist(eng);
            const double g = dual_wealth(t, z, params);
            round_max = std::max(round_max,
                                 std::abs(effective_wealth(t, g, params.r, params).d - 1.0 / z) /
                                     (1.0 / z));
        }
        add_check(report, "terminal_value_function", {{{"max_rel", vf_max}}, vf_max <= 1e-12});
        add_check(report, "terminal_dual_wealth", {{{"max_rel", dual_max}}, dual_max <= 1e-12});
        add_check(report, "dual_roundtrip", {{{"max_rel", round_max}}, round_max <= 1e-14});
    }

    // First-order condition fed the analytic candidate-value partials must
    // reproduce the closed-form allocation.
    {
        std::mt19937_64 eng(splitmix64(sim.seed ^ 0xf0c5eedu));
        std::uniform_real_distribution<double> t_dist(0.0, 0.99 * params.T);
        std::uniform_real_distribution<double> s_dist(0.25 * sim.s0, 2.5 * sim.s0);
        std::uniform_real_distribution<double> v_dist(100.0, 2000.0);
        double max_rel = 0.0;
        int found = 0;
        while (found < 100) {
            const double t = t_dist(eng);
            const double s = s_dist(eng);
            const double v = v_dist(eng);
            const double d = effective_wealth(t, v, params.r, params).d;
            if (!(d > 0.0)) continue;
            if (optimal_policy({t, s, v}, params).regime != Regime::Deposit) continue;
            ++found;
            const double expected = candidate_allocation(t, s, v, params.r, params);
            const double got =
                foc_allocation(t, s, v, params.r, 1.0 / d, -1.0 / (d * d), 0.0, params);
            max_rel = std::max(max_rel, std::abs(got - expected) /
                                            std::max(std::abs(expected), 1e-300));
        }
        add_check(report, "foc_consistency", {{{"max_rel", max_rel}}, max_rel <= 1e-12});
    }

    // Policy continuity across both regime boundaries.
    {
        const ContinuityReport cr =
            policy_continuity_scan(params, 0.25 * params.T, sim.s0);
        add_check(report, "policy_continuity",
                  {{{"max_rel_jump", cr.max_rel_jump},
                    {"v_borrow_boundary", cr.v_borrow_boundary},
                    {"v_deposit_boundary", cr.v_deposit_boundary}},
                   cr.passed});
    }

    // Dynamic-programming residual of the candidate value: diagnosed, not
    // asserted zero. The check pins the finite-difference evaluation to the
    // analytic gap rate + premium^2/sigma^2.
    {
        const double t = 0.25 * params.T;
        const double s = sim.s0;
        const double v = 500.0;
        const ScalarField h1 = [&params](double tt, double, double vv) {
            return value_function(tt, vv, params.r, params);
        };
        const HjbResidual res = hjb_residual(h1, {t, s, v}, params.r, params);
        const double coef = params.k * (params.theta - s) - params.r * s;
        const double analytic = params.r + coef * coef / (params.sigma * params.sigma);
        const double err = std::abs(res.value - analytic);
        add_check(report, "hjb_h1_residual",
                  {{{"residual", res.value}, {"analytic", analytic}, {"abs_error", err}},
                   err <= 1e-4});
    }

    if (budget == VerifyBudget::Full) {
        const StatePoint start{0.0, sim.s0, sim.v0.value_or(1200.0)};
        const std::vector<double> alphas = {0.6, 0.7, 0.8, 0.9, 1.0,
                                            1.1, 1.2, 1.3, 1.4};
        const PerturbationCurve curve = mc_policy_optimality(
            params, start, alphas, 100000, 200, sim.seed, sim.threads);
        bool unimodal = true;
        std::size_t peak = 0;
        for (std::size_t i = 1; i < curve.estimates.size(); ++i)
            if (curve.estimates[i] > curve.estimates[peak]) peak = i;
        for (std::size_t i = 0; i + 1 < curve.estimates.size(); ++i) {
            if (i < peak && !(curve.estimates[i] < curve.estimates[i + 1])) unimodal = false;
            if (i >= peak && !(curve.estimates[i] > curve.estimates[i + 1])) unimodal = false;
        }
        add_check(report, "mc_policy_optimality",
                  {{{"alpha_star", curve.alpha_star},
                    {"clip_fraction", curve.clip_fraction},
                    {"unimodal", unimodal ? 1.0 : 0.0}},
                   curve.alpha_star >= 0.9 && curve.alpha_star <= 1.1 && unimodal});

        const ValueGap gap =
            value_gap(params, start, 100000, 200, sim.seed, sim.threads);
        add_check(report, "value_gap",
                  {{{"gap", gap.gap},
                    {"std_error", gap.std_error},
                    {"mc_estimate", gap.mc_estimate},
                    {"candidate_value", gap.candidate_value}},
                   std::isfinite(gap.gap) && std::isfinite(gap.std_error)});
    }

    return report;
}

}  // namespace pension
