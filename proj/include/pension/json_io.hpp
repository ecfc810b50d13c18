#ifndef PENSION_JSON_IO_HPP
#define PENSION_JSON_IO_HPP

#include <string>

#include "pension/policy.hpp"
#include "pension/simulation.hpp"
#include "pension/verify_harness.hpp"

namespace pension {

// Serialized forms used by the command-line surface. Key order is fixed and
// doubles use shortest round-trip formatting, so identical inputs yield
// byte-identical text.

std::string decision_to_json(const PolicyDecision& decision);
std::string path_stats_to_json(const PathStats& stats);
std::string verify_report_to_json(const VerifyReport& report);

}  // namespace pension

#endif  // PENSION_JSON_IO_HPP
