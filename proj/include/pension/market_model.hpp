#ifndef PENSION_MARKET_MODEL_HPP
#define PENSION_MARKET_MODEL_HPP

#include <stdexcept>

namespace pension {

/**
 * @brief Constants of the two-rate pension market.
 *
 * The market consists of a bank account earning the deposit rate r, loans
 * charged at the rate R > r, and a mean-reverting risky asset
 *
 *   dS = k (theta - S) dt + sigma dW,
 *
 * plus a constant contribution stream c paid until the retirement horizon T.
 * All rates, times and prices are plain doubles in abstract currency/time
 * units.
 */
struct MarketParams {
    double r;      ///< deposit rate per unit time, 0 < r < R
    double R;      ///< loan rate per unit time
    double k;      ///< mean-reversion speed, > 0
    double theta;  ///< long-run price level, > 0
    double sigma;  ///< price volatility per sqrt(time), > 0
    double c;      ///< contribution rate, currency per unit time, >= 0
    double T;      ///< retirement horizon, > 0

    /// Throws std::invalid_argument naming the field and the violated
    /// constraint.
    void validate() const;

    /// Floor applied by the simulator when a Gaussian transition takes the
    /// price nonpositive. The wealth dynamics divide by S, so paths are kept
    /// alive at this floor and the event is counted rather than fatal.
    double price_floor() const { return 1e-6 * theta; }
};

/// A (time, price, wealth) triple at which policies and values are evaluated.
/// Operations require 0 <= t <= T and s > 0.
struct StatePoint {
    double t;
    double s;
    double v;
};

/// First two moments of the O-U transition law.
struct OuMoments {
    double mean;
    double variance;
};

/// Growth factor of a bank balance between t0 and t1: exp(rate * (t1 - t0)).
/// Throws std::domain_error if t0 > t1.
double bank_factor(double t0, double t1, double rate);

/// Exact O-U transition over dt > 0 driven by a standard normal draw z:
///   theta + (s - theta) e^{-k dt} + sigma sqrt((1 - e^{-2 k dt}) / (2k)) z.
double ou_exact_step(double s, double dt, double z, const MarketParams& params);

/// Euler-Maruyama step s + k (theta - s) dt + sigma sqrt(dt) z.
/// Kept for convergence cross-checks; the exact step is the default
/// everywhere else.
double ou_euler_step(double s, double dt, double z, const MarketParams& params);

/// Closed-form mean and variance of S(t) given S(0) = s0, t >= 0.
OuMoments ou_moments(double s0, double t, const MarketParams& params);

}  // namespace pension

#endif  // PENSION_MARKET_MODEL_HPP
