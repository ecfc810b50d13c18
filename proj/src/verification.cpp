#include "pension/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pension/detail/parallel.hpp"
#include "pension/rng.hpp"
#include "pension/stats.hpp"

namespace pension {

namespace {

ResidualReport finish_report(std::vector<double> grid, std::vector<double> residuals,
                             double tolerance, double boundary_abs) {
    ResidualReport report;
    report.grid = std::move(grid);
    report.residuals = std::move(residuals);
    report.tolerance = tolerance;
    report.boundary_abs = boundary_abs;
    double max_abs = 0.0;
    for (double r : report.residuals) max_abs = std::max(max_abs, std::abs(r));
    report.max_abs = max_abs;
    report.passed = max_abs <= tolerance;
    return report;
}

}  // namespace

ResidualReport phi_ode_residual(std::span<const double> t_grid, double rate,
                                const MarketParams& params, double tolerance) {
    std::vector<double> grid(t_grid.begin(), t_grid.end());
    std::vector<double> residuals;
    residuals.reserve(grid.size());
    for (double t : grid) {
        const double value = phi(t, rate, params);
        // phi'(t) = c - c T rate e^{rate (t - T)}
        const double deriv =
            params.c - params.c * params.T * rate * std::exp(rate * (t - params.T));
        residuals.push_back(deriv - rate * value + rate * params.c * t - params.c);
    }
    const double boundary = std::abs(phi(params.T, rate, params));
    return finish_report(std::move(grid), std::move(residuals), tolerance, boundary);
}

ResidualReport f_pde_residual(std::span<const double> s_grid,
                              const MarketParams& params, double tolerance) {
    std::vector<double> grid(s_grid.begin(), s_grid.end());
    std::vector<double> residuals;
    residuals.reserve(grid.size());
    const double f_s = 0.0;   // constant ansatz
    const double f_ss = 0.0;
    for (double s : grid)
        residuals.push_back(params.k * (params.theta - s) * f_s +
                            0.5 * params.sigma * params.sigma * f_ss);
    return finish_report(std::move(grid), std::move(residuals), tolerance, 0.0);
}

std::vector<double> log_spaced_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log_spaced_grid: requires 0 < lo < hi, n >= 2");
    std::vector<double> grid(n);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        grid[i] = std::exp(llo + (lhi - llo) * f);
    }
    return grid;
}

double legendre_transform(const std::function<double(double)>& u,
                          std::span<const double> x_grid, double z) {
    if (!(z > 0.0)) throw std::domain_error("legendre_transform: requires z > 0");
    double best = -std::numeric_limits<double>::infinity();
    for (double x : x_grid) best = std::max(best, u(x) - z * x);
    return best;
}

double log_dual(double z) {
    if (!(z > 0.0)) throw std::domain_error("log_dual: requires z > 0");
    return -std::log(z) - 1.0;
}

std::vector<double> legendre_profile(const std::function<double(double)>& u,
                                     std::span<const double> x_grid,
                                     std::span<const double> z_grid) {
    std::vector<double> profile;
    profile.reserve(z_grid.size());
    for (double z : z_grid) profile.push_back(legendre_transform(u, x_grid, z));
    return profile;
}

double legendre_biconjugate(std::span<const double> profile,
                            std::span<const double> z_grid, double x) {
    if (profile.size() != z_grid.size() || profile.empty())
        throw std::invalid_argument("legendre_biconjugate: profile/grid size mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z_grid.size(); ++i)
        best = std::min(best, profile[i] + z_grid[i] * x);
    return best;
}

double dual_wealth(double t, double z, const MarketParams& params) {
    if (!(z > 0.0)) throw std::domain_error("dual_wealth: requires z > 0");
    return 1.0 / z + phi(t, params.r, params);
}

double foc_allocation(double /*t*/, double s, double /*v*/, double rate,
                      double h_v, double h_vv, double h_vs,
                      const MarketParams& params) {
    if (h_vv == 0.0)
        throw std::domain_error("foc_allocation: degenerate concavity (h_vv = 0)");
    const double coef = params.k * (params.theta - s) - rate * s;
    return -coef * s / (params.sigma * params.sigma) * h_v / h_vv - s * h_vs / h_vv;
}

FieldPartials fd_partials(const ScalarField& H, const StatePoint& state,
                          double rel_step, double abs_floor) {
    const auto step = [&](double x) { return std::max(abs_floor, rel_step * std::abs(x)); };
    const double ht_ = step(state.t);
    const double hs_ = step(state.s);
    const double hv_ = step(state.v);

    const double f0 = H(state.t, state.s, state.v);
    const double ftp = H(state.t + ht_, state.s, state.v);
    const double ftm = H(state.t - ht_, state.s, state.v);
    const double fsp = H(state.t, state.s + hs_, state.v);
    const double fsm = H(state.t, state.s - hs_, state.v);
    const double fvp = H(state.t, state.s, state.v + hv_);
    const double fvm = H(state.t, state.s, state.v - hv_);
    const double fpp = H(state.t, state.s + hs_, state.v + hv_);
    const double fpm = H(state.t, state.s + hs_, state.v - hv_);
    const double fmp = H(state.t, state.s - hs_, state.v + hv_);
    const double fmm = H(state.t, state.s - hs_, state.v - hv_);

    for (double f : {f0, ftp, ftm, fsp, fsm, fvp, fvm, fpp, fpm, fmp, fmm})
        if (!std::isfinite(f))
            throw std::domain_error(
                "fd_partials: field not finite on the stencil (state too close "
                "to a singularity for stable differencing)");

    FieldPartials p;
    p.ht = (ftp - ftm) / (2.0 * ht_);
    p.hs = (fsp - fsm) / (2.0 * hs_);
    p.hv = (fvp - fvm) / (2.0 * hv_);
    p.hss = (fsp - 2.0 * f0 + fsm) / (hs_ * hs_);
    p.hvv = (fvp - 2.0 * f0 + fvm) / (hv_ * hv_);
    p.hvs = (fpp - fpm - fmp + fmm) / (4.0 * hs_ * hv_);
    return p;
}

HjbResidual hjb_residual(const ScalarField& H, const StatePoint& state, double rate,
                         const MarketParams& params, double rel_step,
                         double abs_floor) {
    const FieldPartials p = fd_partials(H, state, rel_step, abs_floor);
    const double coef = params.k * (params.theta - state.s) - rate * state.s;
    const double sig2 = params.sigma * params.sigma;

    double value = p.ht + params.k * (params.theta - state.s) * p.hs +
                   0.5 * sig2 * p.hss +
                   (rate * state.v - rate * params.c * state.t + params.c) * p.hv;
    bool degenerate = false;
    if (p.hvv == 0.0) {
        degenerate = true;  // quotient terms defined as 0
    } else {
        value += -coef * coef / sig2 * p.hv * p.hv / p.hvv -
                 0.5 * sig2 * p.hvs * p.hvs / p.hvv -
                 coef * p.hv * p.hvs / p.hvv;
    }
    return {value, degenerate};
}

namespace {

/// Scaled deposit-branch policies simulated on the effective wealth
/// D = v - c t + c T e^{r (t - T)}, which is self-financing in the deposit
/// regime: dD / D = [r + a coef(s) / s] dt + a (sigma / s) dW with
/// a = y / D. Stepping ln D keeps wealth positive on every path at any
/// step size, which the raw arithmetic wealth recursion does not once the
/// policy's short positions grow with the price (|y| / D ~ s^2 above the
/// zero-premium point). The price marginal still advances by the exact
/// transition with the same draw. Capping y at the free wealth w keeps the
/// deposit nonnegative (this is the constrained branch); cap events are
/// counted per (path, alpha, step).
struct DepositBranchRuns {
    std::vector<std::vector<double>> log_terminal;  // [alpha][path]
    long clip_events = 0;
};

DepositBranchRuns run_deposit_branch(const MarketParams& params,
                                     const StatePoint& state0,
                                     std::span<const double> alphas, long n_paths,
                                     long n_steps, std::uint64_t seed,
                                     unsigned threads) {
    const std::size_t n_alphas = alphas.size();
    const double dt = (params.T - state0.t) / static_cast<double>(n_steps);
    const double sqrt_dt = std::sqrt(dt);
    const double decay = std::exp(-params.k * dt);
    const double noise =
        params.sigma * std::sqrt(-std::expm1(-2.0 * params.k * dt) / (2.0 * params.k));
    const double floor = params.price_floor();
    const double inv_sig2 = 1.0 / (params.sigma * params.sigma);
    const double log_d0 =
        std::log(effective_wealth(state0.t, state0.v, params.r, params).d);

    // Deposit-rate discount on the fixed time grid: w = D - horizon[j].
    std::vector<double> horizon(static_cast<std::size_t>(n_steps));
    for (long j = 0; j < n_steps; ++j) {
        const double t = state0.t + static_cast<double>(j) * dt;
        horizon[static_cast<std::size_t>(j)] =
            params.c * params.T * std::exp(params.r * (t - params.T));
    }

    DepositBranchRuns runs;
    runs.log_terminal.assign(n_alphas,
                             std::vector<double>(static_cast<std::size_t>(n_paths)));
    std::vector<long> clip_counts(static_cast<std::size_t>(n_paths), 0);

    detail::parallel_for_paths(n_paths, threads, [&](long begin, long end) {
        std::vector<double> draws(static_cast<std::size_t>(n_steps));
        std::normal_distribution<double> normal;
        for (long p = begin; p < end; ++p) {
            auto eng = path_engine(seed, static_cast<std::uint64_t>(p));
            normal.reset();
            // Common random numbers: one substream per path, reused for every alpha.
            for (long j = 0; j < n_steps; ++j)
                draws[static_cast<std::size_t>(j)] = normal(eng);
            long clips = 0;
            for (std::size_t ai = 0; ai < n_alphas; ++ai) {
                const double alpha = alphas[ai];
                double s = state0.s;
                double log_d = log_d0;
                for (long j = 0; j < n_steps; ++j) {
                    const std::size_t ju = static_cast<std::size_t>(j);
                    const double d = std::exp(log_d);
                    const double w = d - horizon[ju];
                    const double coef = params.k * (params.theta - s) - params.r * s;
                    double a = alpha * coef * s * inv_sig2;  // y / D
                    if (a * d > w) {  // keep the deposit nonnegative
                        // w <= 0 leaves no admissible deposit-branch exposure
                        // (the full policy would borrow there); sit out.
                        a = w > 0.0 ? w / d : 0.0;
                        ++clips;
                    }
                    const double rel_vol = a * params.sigma / s;
                    log_d += (params.r + a * coef / s - 0.5 * rel_vol * rel_vol) * dt +
                             rel_vol * sqrt_dt * draws[ju];
                    double s_next =
                        params.theta + (s - params.theta) * decay + noise * draws[ju];
                    if (s_next < floor) s_next = floor;
                    s = s_next;
                }
                // phi(T) = 0, so V(T) = D(T) and ln V(T) is log_d itself.
                runs.log_terminal[ai][static_cast<std::size_t>(p)] = log_d;
            }
            clip_counts[static_cast<std::size_t>(p)] = clips;
        }
    });
    for (long cnt : clip_counts) runs.clip_events += cnt;
    return runs;
}

}  // namespace

PerturbationCurve mc_policy_optimality(const MarketParams& params,
                                       const StatePoint& state0,
                                       std::span<const double> alphas,
                                       long n_paths, long n_steps,
                                       std::uint64_t seed, unsigned threads) {
    params.validate();
    if (n_paths < 1 || n_steps < 1)
        throw std::domain_error("mc_policy_optimality: requires n_paths, n_steps >= 1");
    if (alphas.empty())
        throw std::invalid_argument("mc_policy_optimality: alphas must not be empty");
    bool has_unit = false;
    for (double a : alphas)
        if (std::abs(a - 1.0) <= 1e-12) has_unit = true;
    if (!has_unit)
        throw std::invalid_argument("mc_policy_optimality: alphas must include 1.0");
    if (!(state0.t >= 0.0) || !(state0.t < params.T))
        throw std::domain_error("mc_policy_optimality: requires 0 <= t0 < T");
    if (optimal_policy(state0, params).regime != Regime::Deposit)
        throw std::domain_error(
            "mc_policy_optimality: start state must lie in the Deposit regime");

    const std::size_t n_alphas = alphas.size();
    const DepositBranchRuns runs =
        run_deposit_branch(params, state0, alphas, n_paths, n_steps, seed, threads);

    PerturbationCurve curve;
    curve.alphas.assign(alphas.begin(), alphas.end());
    curve.estimates.resize(n_alphas);
    curve.std_errors.resize(n_alphas);
    for (std::size_t ai = 0; ai < n_alphas; ++ai) {
        const MeanVar mv = mean_variance(runs.log_terminal[ai]);
        curve.estimates[ai] = mv.mean;
        curve.std_errors[ai] = std::sqrt(mv.variance / static_cast<double>(n_paths));
    }
    std::size_t best = 0;
    for (std::size_t ai = 1; ai < n_alphas; ++ai)
        if (curve.estimates[ai] > curve.estimates[best]) best = ai;
    curve.alpha_star = curve.alphas[best];

    curve.clip_fraction =
        static_cast<double>(runs.clip_events) /
        (static_cast<double>(n_paths) * static_cast<double>(n_steps) *
         static_cast<double>(n_alphas));
    if (curve.clip_fraction > 0.01) {
        curve.flagged = true;
        curve.flag_reason = "clip fraction above 1%: regime assumption violated";
    } else if (n_alphas >= 2) {
        const auto [lo_it, hi_it] =
            std::minmax_element(curve.estimates.begin(), curve.estimates.end());
        const std::size_t lo = static_cast<std::size_t>(lo_it - curve.estimates.begin());
        const std::size_t hi = static_cast<std::size_t>(hi_it - curve.estimates.begin());
        const double spread = *hi_it - *lo_it;
        const double se = std::hypot(curve.std_errors[lo], curve.std_errors[hi]);
        if (spread <= 2.0 * se) {
            curve.flagged = true;
            curve.flag_reason = "curve statistically flat at this sample size";
        }
    }
    return curve;
}

ValueGap value_gap(const MarketParams& params, const StatePoint& state0,
                   long n_paths, long n_steps, std::uint64_t seed,
                   unsigned threads) {
    params.validate();
    if (n_paths < 1 || n_steps < 1)
        throw std::domain_error("value_gap: requires n_paths, n_steps >= 1");
    if (!(state0.t >= 0.0) || !(state0.t <= params.T))
        throw std::domain_error("value_gap: requires 0 <= t0 <= T");

    if (state0.t == params.T) {  // no evolution: V(T) = v0 and the gap is exactly 0
        const double v = std::log(state0.v);
        return {v, 0.0, v, 0.0};
    }

    if (optimal_policy(state0, params).regime != Regime::Deposit)
        throw std::domain_error("value_gap: start state must lie in the Deposit regime");

    const double alpha_one[] = {1.0};
    const DepositBranchRuns runs =
        run_deposit_branch(params, state0, alpha_one, n_paths, n_steps, seed, threads);
    const MeanVar mv = mean_variance(runs.log_terminal[0]);
    const double mc = mv.mean;
    const double se = std::sqrt(mv.variance / static_cast<double>(n_paths));
    const double candidate = value_function(state0.t, state0.v, params.r, params);
    ValueGap gap{mc, se, candidate, mc - candidate};
    gap.clip_fraction = static_cast<double>(runs.clip_events) /
                        (static_cast<double>(n_paths) * static_cast<double>(n_steps));
    gap.flagged = gap.clip_fraction > 0.01;
    return gap;
}

ContinuityReport policy_continuity_scan(const MarketParams& params, double t,
                                        double s, double rel_step,
                                        double tolerance) {
    params.validate();
    if (!(s > 0.0)) throw std::domain_error("policy_continuity_scan: requires s > 0");

    // Both candidates are affine in w = v - c t: Y_rate(w) = g (w + h) with
    // g = coef s / sigma^2 and h = c T e^{rate (t - T)}. The boundary solves
    // w = g (w + h), which is finite only for g < 1.
    const auto slope = [&](double rate) {
        return (params.k * (params.theta - s) - rate * s) * s /
               (params.sigma * params.sigma);
    };
    const double g_loan = slope(params.R);
    const double g_dep = slope(params.r);
    if (!(g_loan < 1.0) || !(g_dep < 1.0) || !(g_loan > 0.0) || !(g_dep > 0.0))
        throw std::domain_error(
            "policy_continuity_scan: no finite regime boundary at this state");

    const double ct = params.c * t;
    const double h_loan = params.c * params.T * std::exp(params.R * (t - params.T));
    const double h_dep = params.c * params.T * std::exp(params.r * (t - params.T));
    const double v_borrow = g_loan * h_loan / (1.0 - g_loan) + ct;
    const double v_deposit = g_dep * h_dep / (1.0 - g_dep) + ct;

    ContinuityReport report;
    report.v_borrow_boundary = v_borrow;
    report.v_deposit_boundary = v_deposit;

    // The discontinuity itself: adjacent branch values at each boundary.
    const auto branch_mismatch = [&](double v_star, double rate) {
        const double candidate = candidate_allocation(t, s, v_star, rate, params);
        const double constrained = v_star - ct;
        return std::abs(candidate - constrained) /
               std::max({std::abs(candidate), std::abs(constrained), 1e-300});
    };
    report.max_rel_jump = std::max(branch_mismatch(v_borrow, params.R),
                                   branch_mismatch(v_deposit, params.r));

    // Fine scan across each boundary: increments must respect the branch
    // slopes (max slope is 1, in the constrained band).
    const double max_slope = std::max({1.0, g_loan, g_dep});
    bool increments_ok = true;
    double max_increment = 0.0;
    for (double v_star : {v_borrow, v_deposit}) {
        const double dv = std::abs(v_star) * rel_step;
        double prev_y = optimal_policy({t, s, v_star - 30.0 * dv}, params).y;
        for (int i = -29; i <= 30; ++i) {
            const double v = v_star + static_cast<double>(i) * dv;
            const double y = optimal_policy({t, s, v}, params).y;
            const double dy = std::abs(y - prev_y);
            max_increment = std::max(max_increment, dy);
            if (dy > max_slope * dv * (1.0 + 1e-6) + 1e-12) increments_ok = false;
            prev_y = y;
        }
    }
    report.max_scan_increment = max_increment;
    report.increments_bounded = increments_ok;

    // Coarse scan spanning both boundaries: regimes must appear in order
    // Borrow -> Constrained -> Deposit with no backward transition.
    bool ordered = true;
    int last = -1;
    bool seen[3] = {false, false, false};
    const double lo = std::max(ct - 0.5 * (v_borrow - ct), 0.5 * v_borrow);
    const double hi = v_deposit + 0.5 * (v_deposit - v_borrow);
    for (int i = 0; i <= 400; ++i) {
        const double v = lo + (hi - lo) * static_cast<double>(i) / 400.0;
        const PolicyDecision d = optimal_policy({t, s, v}, params);
        const int code = static_cast<int>(d.regime);
        if (code < last) ordered = false;
        last = std::max(last, code);
        seen[code] = true;
    }
    report.regimes_ordered = ordered && seen[0] && seen[1] && seen[2];

    report.passed = report.regimes_ordered && report.increments_bounded &&
                    report.max_rel_jump <= tolerance;
    return report;
}

}  // namespace pension
