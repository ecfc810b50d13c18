// Acceptance suite: every criterion below runs at its stated tolerance and
// prints one PASS/FAIL line. Exit status 0 iff all pass.
//
// Reference parameter set: r = 0.03, R = 0.06, c = 0.2, T = 20 (published),
// k = 0.5, theta = 3, s0 = 2 (documented reference choices), sigma = 1.5
// unless a sweep pins it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pension/config.hpp"
#include "pension/json_io.hpp"
#include "pension/market_model.hpp"
#include "pension/policy.hpp"
#include "pension/rng.hpp"
#include "pension/simulation.hpp"
#include "pension/stats.hpp"
#include "pension/sweep.hpp"
#include "pension/verification.hpp"
#include "pension/verify_harness.hpp"

using namespace pension;

namespace {

MarketParams reference_params() {
    return {0.03, 0.06, 0.5, 3.0, 1.5, 0.2, 20.0};
}

struct Criterion {
    int number;
    std::string title;
    std::function<bool(std::string&)> run;
};

double wall_seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

bool check(bool ok, const char* what, std::string& detail) {
    if (!ok) {
        if (!detail.empty()) detail += "; ";
        detail += "failed: ";
        detail += what;
    }
    return ok;
}

#define REQUIRE_OK(expr, what) \
    do {                       \
        if (!check((expr), (what), detail)) pass = false; \
    } while (0)

bool criterion_phi_ode(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    const auto grid = uniform_grid(0.0, p.T, 1000);
    double elapsed = 0.0;
    ResidualReport rr, rR;
    elapsed = wall_seconds([&] {
        rr = phi_ode_residual(grid, p.r, p);
        rR = phi_ode_residual(grid, p.R, p);
    });
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max_abs r=%.3g R=%.3g, |phi(T)|=%.3g/%.3g, %.3f s", rr.max_abs,
                  rR.max_abs, rr.boundary_abs, rR.boundary_abs, elapsed);
    detail = buf;
    REQUIRE_OK(rr.max_abs <= 1e-12, "deposit-rate max_abs <= 1e-12");
    REQUIRE_OK(rR.max_abs <= 1e-12, "loan-rate max_abs <= 1e-12");
    REQUIRE_OK(rr.boundary_abs <= 1e-15, "deposit-rate |phi(T)| <= 1e-15");
    REQUIRE_OK(rR.boundary_abs <= 1e-15, "loan-rate |phi(T)| <= 1e-15");
    REQUIRE_OK(elapsed < 0.1, "runtime < 0.1 s");
    return pass;
}

bool criterion_terminal_conditions(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    std::mt19937_64 eng(splitmix64(1001));
    std::uniform_real_distribution<double> v_dist(0.5, 1500.0);
    std::uniform_real_distribution<double> z_dist(0.05, 20.0);
    double vf_max = 0.0, dual_max = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double rate = (i % 2 == 0) ? p.r : p.R;
        const double v = v_dist(eng);
        vf_max = std::max(vf_max, std::abs(value_function(p.T, v, rate, p) - std::log(v)) /
                                      std::abs(std::log(v)));
        const double z = z_dist(eng);
        dual_max =
            std::max(dual_max, std::abs(dual_wealth(p.T, z, p) - 1.0 / z) / (1.0 / z));
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max rel: value %.3g, dual %.3g", vf_max, dual_max);
    detail = buf;
    REQUIRE_OK(vf_max <= 1e-12, "value_function(T, v) = ln v within 1e-12");
    REQUIRE_OK(dual_max <= 1e-12, "dual_wealth(T, z) = 1/z within 1e-12");
    return pass;
}

bool criterion_legendre(std::string& detail) {
    bool pass = true;
    const auto x_grid = log_spaced_grid(1e-4, 1e4, 100000);
    const auto log_fn = [](double x) { return std::log(x); };
    double transform_max = 0.0;
    for (double z : log_spaced_grid(0.1, 10.0, 50))
        transform_max = std::max(
            transform_max, std::abs(legendre_transform(log_fn, x_grid, z) - log_dual(z)));

    const auto z_grid = log_spaced_grid(0.02, 20.0, 5000);
    const auto profile = legendre_profile(log_fn, x_grid, z_grid);
    double biconj_max = 0.0;
    for (double x : uniform_grid(0.5, 5.0, 41))
        biconj_max = std::max(
            biconj_max, std::abs(legendre_biconjugate(profile, z_grid, x) - std::log(x)));

    char buf[120];
    std::snprintf(buf, sizeof(buf), "transform err %.3g, biconjugate err %.3g",
                  transform_max, biconj_max);
    detail = buf;
    REQUIRE_OK(transform_max <= 1e-6, "grid transform within 1e-6 of -ln z - 1");
    REQUIRE_OK(biconj_max <= 1e-5, "biconjugate recovers ln within 1e-5");
    return pass;
}

bool criterion_foc(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    std::mt19937_64 eng(splitmix64(1004));
    std::uniform_real_distribution<double> t_dist(0.0, 19.8);
    std::uniform_real_distribution<double> s_dist(0.5, 5.0);
    std::uniform_real_distribution<double> v_dist(100.0, 2000.0);
    double max_rel = 0.0;
    int found = 0;
    while (found < 100) {
        const double t = t_dist(eng);
        const double s = s_dist(eng);
        const double v = v_dist(eng);
        const double d = effective_wealth(t, v, p.r, p).d;
        if (!(d > 0.0)) continue;
        if (optimal_policy({t, s, v}, p).regime != Regime::Deposit) continue;
        ++found;
        const double expected = candidate_allocation(t, s, v, p.r, p);
        const double got = foc_allocation(t, s, v, p.r, 1.0 / d, -1.0 / (d * d), 0.0, p);
        max_rel = std::max(max_rel,
                           std::abs(got - expected) / std::max(std::abs(expected), 1e-300));
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "max rel %.3g over 100 deposit states", max_rel);
    detail = buf;
    REQUIRE_OK(max_rel <= 1e-12, "FOC equals closed form within 1e-12");
    return pass;
}

bool criterion_continuity(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    const ContinuityReport report = policy_continuity_scan(p, 5.0, 2.0, 1e-6, 1e-6);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "boundaries v=%.6f/%.6f, max rel jump %.3g, ordered=%d",
                  report.v_borrow_boundary, report.v_deposit_boundary,
                  report.max_rel_jump, report.regimes_ordered ? 1 : 0);
    detail = buf;
    REQUIRE_OK(report.max_rel_jump <= 1e-6, "max relative jump <= 1e-6");
    REQUIRE_OK(report.regimes_ordered, "regimes ordered Borrow->Constrained->Deposit");
    REQUIRE_OK(report.increments_bounded, "scan increments within branch slopes");
    return pass;
}

bool criterion_sweeps(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    std::filesystem::create_directories("acceptance_out");
    double elapsed = wall_seconds([&] {
        const PresetSweep fig1 = make_preset(SweepPreset::Fig1, p, 2.0, {}, {}, {});
        const auto rows1 = run_sweep(fig1.spec, fig1.params);
        emit_csv_file(rows1, "acceptance_out/fig1.csv");
        for (std::size_t i = 1; i < rows1.size(); ++i)
            if (!(rows1[i].y_star < rows1[i - 1].y_star)) pass = false;

        const PresetSweep fig2 = make_preset(SweepPreset::Fig2, p, 2.0, {}, {}, {});
        const auto rows2 = run_sweep(fig2.spec, fig2.params);
        emit_csv_file(rows2, "acceptance_out/fig2.csv");
        for (std::size_t i = 1; i < rows2.size(); ++i)
            if (!(rows2[i].y_star < rows2[i - 1].y_star)) pass = false;

        const PresetSweep fig3 = make_preset(SweepPreset::Fig3, p, 2.0, {}, {}, {});
        const auto rows3 = run_sweep(fig3.spec, fig3.params);
        emit_csv_file(rows3, "acceptance_out/fig3.csv");
        for (std::size_t i = 1; i < rows3.size(); ++i)
            if (!(rows3[i].y_star >= rows3[i - 1].y_star - 1e-12)) pass = false;

        const PresetSweep fig5 = make_preset(SweepPreset::Fig5, p, 2.0, 1.5, 0.04, 0.08);
        const auto rows5 = run_sweep(fig5.spec, fig5.params);
        emit_csv_file(rows5, "acceptance_out/fig5.csv");
        for (std::size_t i = 0; i < rows5.size(); ++i) {
            if (rows5[i].regime != Regime::Borrow) pass = false;
            if (i > 0 && !(rows5[i].y_star < rows5[i - 1].y_star)) pass = false;
        }
    });
    if (!pass) detail = "a monotonicity or regime requirement failed; ";
    for (const char* name : {"fig1", "fig2", "fig3", "fig5"}) {
        const std::string path = std::string("acceptance_out/") + name + ".csv";
        if (!std::filesystem::exists(path)) {
            pass = false;
            detail += "missing " + path + "; ";
        }
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "four CSVs emitted, %.3f s", elapsed);
    detail += buf;
    if (!(elapsed < 1.0)) {
        pass = false;
        detail += "; runtime >= 1 s";
    }
    return pass;
}

bool criterion_ou_marginal(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    const long n = 100000;
    std::vector<double> samples(n);
    std::normal_distribution<double> normal;
    for (long i = 0; i < n; ++i) {
        auto eng = path_engine(1007, static_cast<std::uint64_t>(i));
        normal.reset();
        samples[static_cast<std::size_t>(i)] = ou_exact_step(1.0, 1.0, normal(eng), p);
    }
    const OuMoments m = ou_moments(1.0, 1.0, p);
    const MeanVar mv = mean_variance(samples);
    const double se_mean = std::sqrt(m.variance / n);
    const double se_var = m.variance * std::sqrt(2.0 / (n - 1.0));
    REQUIRE_OK(std::abs(mv.mean - m.mean) <= 4.0 * se_mean, "sample mean within 4 SE");
    REQUIRE_OK(std::abs(mv.variance - m.variance) <= 4.0 * se_var,
               "sample variance within 4 SE");

    // drift error at a fixed horizon, z = 0: O(dt)
    const auto euler_error = [&](double dt, long steps) {
        double s = 1.0;
        for (long i = 0; i < steps; ++i) s = ou_euler_step(s, dt, 0.0, p);
        return std::abs(s - m.mean);
    };
    const double e1 = euler_error(0.1, 10);
    const double e2 = euler_error(0.01, 100);
    const double e3 = euler_error(0.001, 1000);
    REQUIRE_OK(e1 / e2 > 8.0 && e1 / e2 < 12.0, "error ratio at dt 0.1/0.01 near 10");
    REQUIRE_OK(e2 / e3 > 8.0 && e2 / e3 < 12.0, "error ratio at dt 0.01/0.001 near 10");

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "mean dev %.3g (4SE %.3g), var dev %.3g (4SE %.3g), ratios %.2f/%.2f",
                  std::abs(mv.mean - m.mean), 4.0 * se_mean,
                  std::abs(mv.variance - m.variance), 4.0 * se_var, e1 / e2, e2 / e3);
    std::string extra = detail;
    detail = buf;
    if (!extra.empty()) detail += "; " + extra;
    return pass;
}

bool criterion_zero_risk(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    SimConfig config;
    config.n_paths = 1;
    config.n_steps = 2000;
    config.t0 = 0.0;
    config.s0 = 2.0;
    config.v0 = 100.0;
    const PolicyFn flat = [&p](const StatePoint& st) -> PolicyDecision {
        const double w = st.v - p.c * st.t;
        return {0.0, 0.0, w, Regime::Deposit, {}};
    };
    const PathStats stats = simulate_paths(flat, config, p);
    const double oracle = 186.21188003905090;  // 100 e^{0.6} + 4
    const double rel = std::abs(stats.mean_terminal_wealth - oracle) / oracle;
    char buf[100];
    std::snprintf(buf, sizeof(buf), "terminal %.6f vs %.4f, rel err %.3g",
                  stats.mean_terminal_wealth, oracle, rel);
    detail = buf;
    REQUIRE_OK(rel <= 1e-3, "terminal wealth within relative 1e-3 of the ODE oracle");
    return pass;
}

bool criterion_mc_optimality(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    const std::vector<double> alphas{0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4};
    PerturbationCurve curve;
    const double elapsed = wall_seconds([&] {
        curve = mc_policy_optimality(p, {0.0, 2.0, 1200.0}, alphas, 100000, 200, 2024);
    });
    std::size_t peak = 0;
    for (std::size_t i = 1; i < curve.estimates.size(); ++i)
        if (curve.estimates[i] > curve.estimates[peak]) peak = i;
    bool unimodal = true;
    for (std::size_t i = 0; i + 1 < curve.estimates.size(); ++i) {
        if (i < peak && !(curve.estimates[i] < curve.estimates[i + 1])) unimodal = false;
        if (i >= peak && !(curve.estimates[i] > curve.estimates[i + 1])) unimodal = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "alpha* = %.2f, unimodal=%d, clip %.2e, flagged=%d, %.1f s",
                  curve.alpha_star, unimodal ? 1 : 0, curve.clip_fraction,
                  curve.flagged ? 1 : 0, elapsed);
    detail = buf;
    REQUIRE_OK(curve.alpha_star >= 0.9 && curve.alpha_star <= 1.1,
               "alpha_star in [0.9, 1.1]");
    REQUIRE_OK(unimodal, "estimate curve unimodal");
    REQUIRE_OK(elapsed < 60.0, "runtime < 60 s");
    return pass;
}

bool criterion_determinism(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();

    SimConfig config;
    config.n_paths = 5000;
    config.n_steps = 2000;
    config.s0 = 2.0;
    config.v0 = 1200.0;
    config.seed = 7;
    config.threads = 1;
    const PolicyFn policy = [&p](const StatePoint& st) {
        return capped_optimal_policy(st, p);
    };
    const std::string run1 = path_stats_to_json(simulate_paths(policy, config, p));
    const std::string run2 = path_stats_to_json(simulate_paths(policy, config, p));
    config.threads = 4;
    const std::string run4 = path_stats_to_json(simulate_paths(policy, config, p));
    REQUIRE_OK(run1 == run2, "simulate byte-identical across runs");
    REQUIRE_OK(run1 == run4, "simulate byte-identical across thread counts");

    SimDefaults sim;
    sim.s0 = 2.0;
    sim.v0 = 1200.0;
    sim.seed = 7;
    sim.threads = 1;
    const std::string verify1 =
        verify_report_to_json(run_verify(p, sim, VerifyBudget::Full));
    sim.threads = 4;
    const std::string verify4 =
        verify_report_to_json(run_verify(p, sim, VerifyBudget::Full));
    sim.threads = 1;
    const std::string verify1b =
        verify_report_to_json(run_verify(p, sim, VerifyBudget::Full));
    REQUIRE_OK(verify1 == verify1b, "verify --full byte-identical across runs");
    REQUIRE_OK(verify1 == verify4, "verify --full byte-identical across thread counts");
    detail = "simulate and full verification reports compared as serialized bytes";
    return pass;
}

bool criterion_value_gap(std::string& detail) {
    bool pass = true;
    const MarketParams p = reference_params();
    const ValueGap at_horizon = value_gap(p, {p.T, 2.0, 500.0}, 1000, 10, 5);
    REQUIRE_OK(at_horizon.gap == 0.0, "gap exactly 0 at t0 = T");
    REQUIRE_OK(at_horizon.std_error == 0.0, "zero SE at t0 = T");

    const ValueGap gap = value_gap(p, {0.0, 2.0, 1200.0}, 100000, 200, 2024);
    REQUIRE_OK(std::isfinite(gap.gap), "finite gap at the reference deposit start");
    REQUIRE_OK(std::isfinite(gap.std_error) && gap.std_error > 0.0,
               "finite positive standard error");
    char buf[140];
    std::snprintf(buf, sizeof(buf), "gap %.4f +- %.4f (mc %.4f vs candidate %.4f)",
                  gap.gap, gap.std_error, gap.mc_estimate, gap.candidate_value);
    std::string extra = detail;
    detail = buf;
    if (!extra.empty()) detail += "; " + extra;
    return pass;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "phi ODE exactness at both rates", criterion_phi_ode},
        {2, "terminal value and dual-wealth conditions", criterion_terminal_conditions},
        {3, "Legendre duality and biconjugate recovery", criterion_legendre},
        {4, "first-order condition consistency", criterion_foc},
        {5, "policy continuity across regime boundaries", criterion_continuity},
        {6, "figure-shaped sweep monotonicity with CSV output", criterion_sweeps},
        {7, "O-U marginal correctness and Euler convergence", criterion_ou_marginal},
        {8, "zero-risk wealth against the linear-ODE oracle", criterion_zero_risk},
        {9, "Monte Carlo policy optimality (perturbation argmax)", criterion_mc_optimality},
        {10, "byte-identical determinism across runs and threads", criterion_determinism},
        {11, "value-gap diagnostic", criterion_value_gap},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::printf("[%s] criterion %2d: %s — %s\n", ok ? "PASS" : "FAIL", c.number,
                    c.title.c_str(), detail.c_str());
        std::fflush(stdout);
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
