#ifndef PENSION_CONFIG_HPP
#define PENSION_CONFIG_HPP

#include <optional>
#include <string>

#include "pension/market_model.hpp"
#include "pension/simulation.hpp"

namespace pension {

/// Simulation defaults carried by a configuration file. s0 is required (the
/// model publishes no value for it); v0 stays empty until supplied.
struct SimDefaults {
    long n_paths = 10000;
    long n_steps = 200;
    double t0 = 0.0;
    double s0 = 0.0;
    std::optional<double> v0;
    std::uint64_t seed = 42;
    Stepper stepper = Stepper::Exact;
    unsigned threads = 0;
};

struct ParsedConfig {
    MarketParams params;
    SimDefaults sim;
};

/**
 * @brief Parses and validates the JSON configuration.
 *
 * Accepted keys: r, R, k, theta, sigma, c, T, s0, v0, t0, n_paths, n_steps,
 * seed, stepper ("exact"|"euler"), threads. Unknown keys are rejected.
 * r, R, c and T default to 0.03, 0.06, 0.2 and 20; k, theta, sigma and s0
 * have no published defaults and must be given explicitly. Violations raise
 * std::invalid_argument naming the field and constraint.
 */
ParsedConfig parse_config_text(const std::string& text);

/// parse_config_text on the contents of a file.
ParsedConfig parse_config_file(const std::string& path);

}  // namespace pension

#endif  // PENSION_CONFIG_HPP
