#include "pension/json_io.hpp"

#include "json.hpp"

namespace pension {

namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

std::string decision_to_json(const PolicyDecision& decision) {
    ordered_json j;
    j["y"] = decision.y;
    j["l"] = decision.l;
    j["b"] = decision.b;
    j["regime"] = to_string(decision.regime);
    ordered_json warnings = ordered_json::array();
    for (PolicyWarning w : decision.warnings) warnings.push_back(to_string(w));
    j["warnings"] = warnings;
    return j.dump(2);
}

std::string path_stats_to_json(const PathStats& stats) {
    ordered_json j;
    j["mean_terminal_wealth"] = stats.mean_terminal_wealth;
    j["var_terminal_wealth"] = stats.var_terminal_wealth;
    j["mean_log_terminal_wealth"] = stats.mean_log_terminal_wealth;
    j["se_log_terminal_wealth"] = stats.se_log_terminal_wealth;
    ordered_json occ;
    occ["Borrow"] = stats.regime_occupancy[0];
    occ["Constrained"] = stats.regime_occupancy[1];
    occ["Deposit"] = stats.regime_occupancy[2];
    j["regime_occupancy"] = occ;
    j["floor_hits"] = stats.floor_hits;
    j["clip_events"] = stats.clip_events;
    return j.dump(2);
}

std::string verify_report_to_json(const VerifyReport& report) {
    ordered_json j;
    for (const auto& [name, result] : report.checks) {
        ordered_json entry;
        for (const auto& [key, value] : result.metrics) entry[key] = value;
        entry["passed"] = result.passed;
        j[name] = entry;
    }
    return j.dump(2);
}

}  // namespace pension
