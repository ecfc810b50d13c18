#ifndef PENSION_SWEEP_HPP
#define PENSION_SWEEP_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pension/market_model.hpp"
#include "pension/policy.hpp"

namespace pension {

enum class SweepParam { Sigma, V, R, S, T };

const char* to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& name);

enum class SweepPreset { Fig1, Fig2, Fig3, Fig5 };

/// Rejects "fig4": its swept parameter never appears in the model dynamics,
/// so the preset is refused rather than approximated.
SweepPreset parse_preset_name(const std::string& name);

/// One-parameter scan: the swept parameter overrides the corresponding
/// market or state field pointwise on a uniform grid of `points` values.
struct SweepSpec {
    SweepParam parameter;
    double from;
    double to;
    long points;
    StatePoint fixed_state;
    std::optional<SweepPreset> preset;

    void validate(const MarketParams& params) const;
};

struct SweepRow {
    double parameter_value;
    double y_star;
    Regime regime;
    double l;
    double b;
};

struct PresetSweep {
    SweepSpec spec;
    MarketParams params;  ///< fig3 pins sigma = 0.2; others pass through
};

/**
 * @brief Builds the published scans.
 *
 * fig1/fig2: sigma in [1, 2.4] at wealth 500 / 1200, t = 5.
 * fig3: wealth sweep over [100, 2000] at sigma = 0.2, t = 5.
 * fig5: loan-rate sweep; no published range or wealth exists, so `from`,
 * `to` and `v_fixed` must be supplied (from > r enforced by validate).
 * `s0` seeds the fixed state's price; `points` defaults to 50.
 */
PresetSweep make_preset(SweepPreset preset, const MarketParams& params,
                        double s0, std::optional<double> v_fixed,
                        std::optional<double> from, std::optional<double> to,
                        long points = 50);

/// Evaluates the optimal policy at every grid point of a validated spec.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const MarketParams& params);

/// Header "parameter_value,y_star,regime,l,b", then one row per entry,
/// decimals with 12 significant digits, newline-terminated, no locale.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_csv_file(const std::vector<SweepRow>& rows, const std::string& path);

/// Inverse of emit_csv for round-trip checks and downstream tooling.
std::vector<SweepRow> parse_sweep_csv(std::istream& in);

}  // namespace pension

#endif  // PENSION_SWEEP_HPP
