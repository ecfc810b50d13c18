#ifndef PENSION_VERIFY_HARNESS_HPP
#define PENSION_VERIFY_HARNESS_HPP

#include <string>
#include <utility>
#include <vector>

#include "pension/config.hpp"
#include "pension/market_model.hpp"

namespace pension {

enum class VerifyBudget { Quick, Full };

struct CheckResult {
    std::vector<std::pair<std::string, double>> metrics;
    bool passed = false;
};

struct VerifyReport {
    std::vector<std::pair<std::string, CheckResult>> checks;

    bool all_passed() const;
};

/**
 * @brief Runs the verification suite against one parameter set.
 *
 * Quick covers the residual, duality, terminal-condition, first-order
 * condition and continuity checks (well under five seconds). Full adds the
 * Monte Carlo perturbation test and the value-gap diagnostic at their
 * acceptance sample sizes (1e5 paths, 200 steps, alphas 0.6..1.4). The
 * perturbation start is (t0 = 0, s0, v0 or 1200) and must sit in the
 * Deposit regime. Deterministic for a fixed seed across thread counts.
 */
VerifyReport run_verify(const MarketParams& params, const SimDefaults& sim,
                        VerifyBudget budget);

}  // namespace pension

#endif  // PENSION_VERIFY_HARNESS_HPP
