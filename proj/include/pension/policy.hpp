#ifndef PENSION_POLICY_HPP
#define PENSION_POLICY_HPP

#include <vector>

#include "pension/market_model.hpp"

namespace pension {

/// Which branch of the piecewise optimal allocation applies.
enum class Regime { Borrow = 0, Constrained = 1, Deposit = 2 };

const char* to_string(Regime regime);

enum class PolicyWarning {
    /// Both risk-premium coefficients negative and the loan-rate candidate
    /// exceeds the deposit-rate candidate; the deposit candidate is returned.
    DegenerateOrdering,
    /// A scaled policy wanted more than the free wealth and was capped.
    Clipped,
};

const char* to_string(PolicyWarning warning);

/**
 * @brief Allocation triple chosen at a state.
 *
 * l and b are nonnegative and never simultaneously positive, and the budget
 * identity b + y - l + c t = v holds to machine precision by construction.
 * y may be negative (a short position).
 */
struct PolicyDecision {
    double y;  ///< risky allocation (currency)
    double l;  ///< loan amount, >= 0
    double b;  ///< bank deposit, >= 0
    Regime regime;
    std::vector<PolicyWarning> warnings;
};

/// Wealth net of the contribution accounting:
///   d = v - c t + c T e^{rate (t - T)}.
/// Equals the reciprocal dual variable 1/z. May be <= 0 here; consumers that
/// take logarithms or evaluate the closed-form policy reject d <= 0.
struct EffectiveWealth {
    double d;
};

/// c t - c T e^{rate (t - T)}, the time-dependent part of the dual wealth.
/// Vanishes at t = T. Throws std::domain_error for t outside [0, T].
double phi(double t, double rate, const MarketParams& params);

/// The price-dependent separation factor. Identically 1: the dual PDE's
/// price part is solved by a constant.
double f_ansatz(double s);

/// d = v - phi(t, rate). Never throws; d <= 0 is allowed here.
EffectiveWealth effective_wealth(double t, double v, double rate,
                                 const MarketParams& params);

/// Closed-form candidate allocation at one rate:
///   [k (theta - s) - rate s] * d * s / sigma^2
/// with d the effective wealth at that rate. May be negative (short).
/// Throws std::domain_error if s <= 0 or t outside [0, T].
double candidate_allocation(double t, double s, double v, double rate,
                            const MarketParams& params);

/**
 * @brief The three-regime optimal allocation.
 *
 * With w = v - c t, Y_R and Y_r the candidates at the loan and deposit rate:
 *   w <= Y_R          -> Borrow:      y = Y_R, l = Y_R - w, b = 0
 *   w >= Y_r          -> Deposit:     y = Y_r, l = 0, b = w - Y_r
 *   otherwise         -> Constrained: y = w,   l = 0, b = 0
 *
 * Ties at the boundaries resolve in that order; all branches agree in value
 * there, so the choice affects only the regime label. The degenerate
 * ordering Y_R > Y_r (both premia negative) returns the Deposit candidate
 * with a DegenerateOrdering warning.
 *
 * Throws std::domain_error if s <= 0, t is outside [0, T], or the effective
 * wealth is nonpositive at either rate.
 */
PolicyDecision optimal_policy(const StatePoint& state, const MarketParams& params);

/// ln of the effective wealth: the candidate value function at one rate.
/// With rate = r this is the deposit-region value, with rate = R the
/// loan-region value. Throws std::domain_error when the effective wealth is
/// nonpositive.
double value_function(double t, double v, double rate, const MarketParams& params);

}  // namespace pension

#endif  // PENSION_POLICY_HPP
