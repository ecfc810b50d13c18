#ifndef PENSION_SIMULATION_HPP
#define PENSION_SIMULATION_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "pension/market_model.hpp"
#include "pension/policy.hpp"

namespace pension {

enum class Stepper { Exact, Euler };

/// Monte Carlo run parameters. Results are a pure function of
/// (config, params, policy); `threads` only selects the execution schedule
/// and never changes any output bit.
struct SimConfig {
    long n_paths = 10000;
    long n_steps = 200;
    double t0 = 0.0;
    double s0 = 0.0;
    double v0 = 0.0;
    std::uint64_t seed = 42;
    Stepper stepper = Stepper::Exact;
    unsigned threads = 0;  ///< 0 = hardware concurrency

    /// t0 == T is permitted as a degenerate zero-evolution run (the paths
    /// collapse to v0); everything else follows the stated ranges.
    void validate(const MarketParams& params) const;
};

/// Summary statistics over terminal wealths and per-step decisions.
struct PathStats {
    double mean_terminal_wealth = 0.0;
    double var_terminal_wealth = 0.0;
    /// NaN (with NaN standard error) if any terminal wealth is nonpositive.
    double mean_log_terminal_wealth = 0.0;
    double se_log_terminal_wealth = 0.0;
    /// Fractions of decisions per regime, indexed by Regime; sums to 1.
    std::array<double, 3> regime_occupancy{};
    long floor_hits = 0;
    long clip_events = 0;
};

struct WealthStep {
    double s_next;
    double v_next;
    bool floored;
};

/// One coupled (price, wealth) step. The same draw z drives both marginals:
///   v_next = v + (r b - R l + c) dt + y (s_next - s) / s.
/// If the price step lands below the floor, the floored value is used for
/// the increment and `floored` is set.
WealthStep wealth_step(const StatePoint& state, const PolicyDecision& decision,
                       double dt, double z, const MarketParams& params,
                       Stepper stepper = Stepper::Exact);

using PolicyFn = std::function<PolicyDecision(const StatePoint&)>;

/// Long-only variant of the optimal allocation: the deposit-rate candidate
/// capped into [0, max(w, 0)] with w = v - c t, borrowing only to cover
/// negative free wealth. Total on every state with s > 0, and terminal
/// wealth stays positive under the price floor, unlike the unbounded-short
/// optimal policy, which can exit its effective-wealth domain on extreme
/// price excursions.
PolicyDecision capped_optimal_policy(const StatePoint& state,
                                     const MarketParams& params);

/// Runs n_paths independent paths of n_steps uniform steps from t0 to T,
/// calling the policy at every step. Each decision is checked against the
/// admissibility rules (l >= 0, b >= 0, l b = 0, budget identity within
/// 1e-9 relative); a violation is a hard error naming the path and step.
/// Deterministic for a fixed seed across runs and thread counts: every path
/// draws from its own substream and the reduction order is fixed. When
/// terminal_out is given it receives the per-path terminal wealths in path
/// order.
PathStats simulate_paths(const PolicyFn& policy, const SimConfig& config,
                         const MarketParams& params,
                         std::vector<double>* terminal_out = nullptr);

struct LogUtilityEstimate {
    double estimate;
    double std_error;
};

/// Sample mean and standard error of ln V(T). Throws std::domain_error
/// listing the offending paths if any terminal wealth is nonpositive.
LogUtilityEstimate expected_log_utility(const PolicyFn& policy,
                                        const SimConfig& config,
                                        const MarketParams& params);

}  // namespace pension

#endif  // PENSION_SIMULATION_HPP
