#include "pension/market_model.hpp"

#include <cmath>
#include <string>

namespace pension {

namespace {

[[noreturn]] void reject(const std::string& what) {
    throw std::invalid_argument("MarketParams: " + what);
}

}  // namespace

void MarketParams::validate() const {
    if (!(r > 0.0)) reject("requires r > 0, got r=" + std::to_string(r));
    if (!(r < R))
        reject("requires r < R, got r=" + std::to_string(r) +
               ", R=" + std::to_string(R));
    if (!(k > 0.0)) reject("requires k > 0, got k=" + std::to_string(k));
    if (!(theta > 0.0))
        reject("requires theta > 0, got theta=" + std::to_string(theta));
    if (!(sigma > 0.0))
        reject("requires sigma > 0, got sigma=" + std::to_string(sigma));
    if (!(c >= 0.0)) reject("requires c >= 0, got c=" + std::to_string(c));
    if (!(T > 0.0)) reject("requires T > 0, got T=" + std::to_string(T));
}

double bank_factor(double t0, double t1, double rate) {
    if (t0 > t1) throw std::domain_error("bank_factor: requires t0 <= t1");
    return std::exp(rate * (t1 - t0));
}

double ou_exact_step(double s, double dt, double z, const MarketParams& params) {
    if (!(dt > 0.0)) throw std::domain_error("ou_exact_step: requires dt > 0");
    const double decay = std::exp(-params.k * dt);
    // 1 - e^{-2k dt} via expm1 to keep small-dt steps accurate.
    const double sd =
        params.sigma * std::sqrt(-std::expm1(-2.0 * params.k * dt) / (2.0 * params.k));
    return params.theta + (s - params.theta) * decay + sd * z;
}

double ou_euler_step(double s, double dt, double z, const MarketParams& params) {
    if (!(dt > 0.0)) throw std::domain_error("ou_euler_step: requires dt > 0");
    return s + params.k * (params.theta - s) * dt +
           params.sigma * std::sqrt(dt) * z;
}

OuMoments ou_moments(double s0, double t, const MarketParams& params) {
    if (!(t >= 0.0)) throw std::domain_error("ou_moments: requires t >= 0");
    const double decay = std::exp(-params.k * t);
    const double variance =
        params.sigma * params.sigma * -std::expm1(-2.0 * params.k * t) /
        (2.0 * params.k);
    return {params.theta + (s0 - params.theta) * decay, variance};
}

}  // namespace pension
