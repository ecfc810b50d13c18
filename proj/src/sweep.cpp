#include "pension/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pension {

const char* to_string(SweepParam p) {
    switch (p) {
        case SweepParam::Sigma: return "sigma";
        case SweepParam::V: return "v";
        case SweepParam::R: return "R";
        case SweepParam::S: return "s";
        case SweepParam::T: return "t";
    }
    return "?";
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "sigma") return SweepParam::Sigma;
    if (name == "v") return SweepParam::V;
    if (name == "R") return SweepParam::R;
    if (name == "s") return SweepParam::S;
    if (name == "t") return SweepParam::T;
    throw std::invalid_argument("sweep: unknown parameter \"" + name +
                                "\" (expected sigma|v|R|s|t)");
}

SweepPreset parse_preset_name(const std::string& name) {
    if (name == "fig1") return SweepPreset::Fig1;
    if (name == "fig2") return SweepPreset::Fig2;
    if (name == "fig3") return SweepPreset::Fig3;
    if (name == "fig5") return SweepPreset::Fig5;
    if (name == "fig4")
        throw std::invalid_argument(
            "sweep: mu undefined in model; Fig. 4 out of scope");
    throw std::invalid_argument("sweep: unknown preset \"" + name +
                                "\" (expected fig1|fig2|fig3|fig5)");
}

void SweepSpec::validate(const MarketParams& params) const {
    params.validate();
    if (!(from < to))
        throw std::invalid_argument("sweep: requires from < to");
    if (points < 2) throw std::invalid_argument("sweep: requires points >= 2");
    if (!(fixed_state.t >= 0.0) || !(fixed_state.t <= params.T))
        throw std::invalid_argument("sweep: fixed state requires 0 <= t <= T");
    switch (parameter) {
        case SweepParam::Sigma:
            if (!(from > 0.0)) throw std::invalid_argument("sweep: sigma range requires from > 0");
            break;
        case SweepParam::R:
            if (!(from > params.r))
                throw std::invalid_argument("sweep: R range must keep r < R");
            break;
        case SweepParam::S:
            if (!(from > 0.0)) throw std::invalid_argument("sweep: s range requires from > 0");
            break;
        case SweepParam::T:
            if (!(from >= 0.0) || !(to <= params.T))
                throw std::invalid_argument("sweep: t range must lie in [0, T]");
            break;
        case SweepParam::V:
            break;
    }
    if (parameter != SweepParam::S && !(fixed_state.s > 0.0))
        throw std::invalid_argument("sweep: fixed state requires s > 0");
}

PresetSweep make_preset(SweepPreset preset, const MarketParams& params, double s0,
                        std::optional<double> v_fixed, std::optional<double> from,
                        std::optional<double> to, long points) {
    params.validate();
    if (!(s0 > 0.0)) throw std::invalid_argument("sweep: preset requires s0 > 0");
    const double t_fig = 5.0;
    if (!(params.T > t_fig))
        throw std::invalid_argument("sweep: presets evaluate at t = 5; requires T > 5");

    const auto reject_range = [&](const char* name) {
        if (from || to)
            throw std::invalid_argument(std::string("sweep: preset ") + name +
                                        " fixes its own range");
    };
    const auto reject_v = [&](const char* name) {
        if (v_fixed)
            throw std::invalid_argument(std::string("sweep: preset ") + name +
                                        " fixes its own wealth");
    };

    PresetSweep out{{}, params};
    switch (preset) {
        case SweepPreset::Fig1:
            reject_range("fig1");
            reject_v("fig1");
            out.spec = {SweepParam::Sigma, 1.0, 2.4, points, {t_fig, s0, 500.0},
                        SweepPreset::Fig1};
            break;
        case SweepPreset::Fig2:
            reject_range("fig2");
            reject_v("fig2");
            out.spec = {SweepParam::Sigma, 1.0, 2.4, points, {t_fig, s0, 1200.0},
                        SweepPreset::Fig2};
            break;
        case SweepPreset::Fig3:
            reject_range("fig3");
            reject_v("fig3");
            out.params.sigma = 0.2;  // the published volatility for this scan
            out.spec = {SweepParam::V, 100.0, 2000.0, points, {t_fig, s0, 0.0},
                        SweepPreset::Fig3};
            break;
        case SweepPreset::Fig5:
            if (!from || !to)
                throw std::invalid_argument(
                    "sweep: fig5 requires an explicit --from/--to (no published "
                    "range exists)");
            if (!v_fixed)
                throw std::invalid_argument(
                    "sweep: fig5 requires an explicit wealth --v (no published "
                    "value exists)");
            out.spec = {SweepParam::R, *from, *to, points, {t_fig, s0, *v_fixed},
                        SweepPreset::Fig5};
            break;
    }
    out.spec.validate(out.params);
    return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const MarketParams& params) {
    spec.validate(params);
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.points));
    for (long i = 0; i < spec.points; ++i) {
        const double x = spec.from + (spec.to - spec.from) * static_cast<double>(i) /
                                         static_cast<double>(spec.points - 1);
        MarketParams point_params = params;
        StatePoint state = spec.fixed_state;
        switch (spec.parameter) {
            case SweepParam::Sigma: point_params.sigma = x; break;
            case SweepParam::V: state.v = x; break;
            case SweepParam::R: point_params.R = x; break;
            case SweepParam::S: state.s = x; break;
            case SweepParam::T: state.t = x; break;
        }
        const PolicyDecision d = optimal_policy(state, point_params);
        rows.push_back({x, d.y, d.regime, d.l, d.b});
    }
    return rows;
}

namespace {

void append_number(std::string& line, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    line += buf;
}

}  // namespace

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "parameter_value,y_star,regime,l,b\n";
    for (const SweepRow& row : rows) {
        std::string line;
        append_number(line, row.parameter_value);
        line += ',';
        append_number(line, row.y_star);
        line += ',';
        line += to_string(row.regime);
        line += ',';
        append_number(line, row.l);
        line += ',';
        append_number(line, row.b);
        line += '\n';
        out << line;
    }
}

void emit_csv_file(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open \"" + path + "\"");
    emit_csv(rows, out);
    out.flush();
    if (!out) throw std::runtime_error("emit_csv: write failed for \"" + path + "\"");
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "parameter_value,y_star,regime,l,b")
        throw std::invalid_argument("parse_sweep_csv: bad header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        SweepRow row;
        const auto next = [&]() {
            if (!std::getline(cells, cell, ','))
                throw std::invalid_argument("parse_sweep_csv: short row: " + line);
            return cell;
        };
        row.parameter_value = std::stod(next());
        row.y_star = std::stod(next());
        const std::string regime = next();
        if (regime == "Borrow")
            row.regime = Regime::Borrow;
        else if (regime == "Constrained")
            row.regime = Regime::Constrained;
        else if (regime == "Deposit")
            row.regime = Regime::Deposit;
        else
            throw std::invalid_argument("parse_sweep_csv: bad regime \"" + regime + "\"");
        row.l = std::stod(next());
        row.b = std::stod(next());
        rows.push_back(row);
    }
    return rows;
}

}  // namespace pension
