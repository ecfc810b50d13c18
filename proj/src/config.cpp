#include "pension/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pension {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("config: " + what);
}

double number_field(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail(std::string(key) + " must be a number");
    return j[key].get<double>();
}

double required_field(const json& j, const char* key) {
    if (!j.contains(key))
        fail(std::string(key) + " required: no published default exists");
    if (!j[key].is_number()) fail(std::string(key) + " must be a number");
    return j[key].get<double>();
}

long integer_field(const json& j, const char* key, long fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) fail(std::string(key) + " must be an integer");
    return j[key].get<long>();
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("top level must be a JSON object");

    static const std::set<std::string> known = {
        "r", "R", "k", "theta", "sigma", "c", "T", "s0", "v0",
        "t0", "n_paths", "n_steps", "seed", "stepper", "threads"};
    for (const auto& item : j.items())
        if (!known.count(item.key())) fail("unknown key \"" + item.key() + "\"");

    ParsedConfig parsed;
    MarketParams& p = parsed.params;
    p.r = number_field(j, "r", 0.03);
    p.R = number_field(j, "R", 0.06);
    p.c = number_field(j, "c", 0.2);
    p.T = number_field(j, "T", 20.0);
    p.k = required_field(j, "k");
    p.theta = required_field(j, "theta");
    p.sigma = required_field(j, "sigma");
    p.validate();

    SimDefaults& sim = parsed.sim;
    sim.s0 = required_field(j, "s0");
    if (!(sim.s0 > 0.0)) fail("requires s0 > 0");
    if (j.contains("v0")) {
        if (!j["v0"].is_number()) fail("v0 must be a number");
        sim.v0 = j["v0"].get<double>();
    }
    sim.t0 = number_field(j, "t0", 0.0);
    if (!(sim.t0 >= 0.0) || !(sim.t0 <= p.T)) fail("requires 0 <= t0 <= T");
    sim.n_paths = integer_field(j, "n_paths", sim.n_paths);
    if (sim.n_paths < 1) fail("requires n_paths >= 1");
    sim.n_steps = integer_field(j, "n_steps", sim.n_steps);
    if (sim.n_steps < 1) fail("requires n_steps >= 1");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) fail("seed must be an integer");
        sim.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("stepper")) {
        if (!j["stepper"].is_string()) fail("stepper must be a string");
        const std::string name = j["stepper"].get<std::string>();
        if (name == "exact")
            sim.stepper = Stepper::Exact;
        else if (name == "euler")
            sim.stepper = Stepper::Euler;
        else
            fail("stepper must be \"exact\" or \"euler\", got \"" + name + "\"");
    }
    const long threads = integer_field(j, "threads", 0);
    if (threads < 0) fail("requires threads >= 0");
    sim.threads = static_cast<unsigned>(threads);

    return parsed;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace pension
