#pragma once

#include <cmath>
#include <string>

#include "ragprobe/common.hpp"
#include "ragprobe/metrics.hpp"

namespace ragprobe {

/// Numeric stand-ins for the qualitative "negligible" / "large" bounds the
/// role definitions use. Defaults are configuration, not constants.
struct RoleThresholds {
    double eps_delta = 0.05;  // negligible utility change
    double eps_div = 0.10;    // negligible trace divergence
    double large_div = 0.40;  // large trace divergence

    void validate() const {
        if (!(eps_delta > 0)) throw ConfigError("eps_delta must be positive");
        if (!(0 <= eps_div && eps_div < large_div && large_div <= 1))
            throw ConfigError("role thresholds require 0 <= eps_div < large_div <= 1");
    }
};

/// Operational evidence roles. A corrective role (the item holds open a
/// recovery path from a bad intermediate state) is deliberately absent:
/// single-shot traces expose no intermediate state in which recovery could
/// be observed, so it can never be assigned here.
enum class RoleLabel { constructive, redundant, distractive, confidence_distorting, unclassified };

inline const char* to_string(RoleLabel r) {
    switch (r) {
        case RoleLabel::constructive: return "constructive";
        case RoleLabel::redundant: return "redundant";
        case RoleLabel::distractive: return "distractive";
        case RoleLabel::confidence_distorting: return "confidence_distorting";
        case RoleLabel::unclassified: return "unclassified";
    }
    return "?";
}

inline RoleLabel role_from_string(const std::string& s) {
    if (s == "constructive") return RoleLabel::constructive;
    if (s == "redundant") return RoleLabel::redundant;
    if (s == "distractive") return RoleLabel::distractive;
    if (s == "confidence_distorting") return RoleLabel::confidence_distorting;
    if (s == "unclassified") return RoleLabel::unclassified;
    throw DataError("unknown role label '" + s + "'");
}

/// `label` is the single precedence-resolved role; the flags record which of
/// the overlapping constructive/distractive conditions held, since
/// distractive wins precedence exactly when both do.
struct RoleAssignment {
    RoleLabel label = RoleLabel::unclassified;
    bool constructive = false;
    bool distractive = false;
};

/// Map one intervention's deltas to a role. Evaluated in fixed precedence:
/// distractive (large divergence and worsened correctness/grounding), then
/// constructive, then confidence-distorting (confidence error moved without
/// a correctness change), then redundant (everything negligible), else
/// unclassified. Total and deterministic.
inline RoleAssignment assign_role(const DeltaVector& d, const RoleThresholds& t = {}) {
    const bool harms = d.d_correct > t.eps_delta || d.d_grounding > t.eps_delta;
    if (d.trace_div >= t.large_div && harms)
        return {RoleLabel::distractive, true, true};
    if (harms) return {RoleLabel::constructive, true, false};
    if (std::abs(d.d_conf_error) > t.eps_delta && std::abs(d.d_correct) <= t.eps_delta)
        return {RoleLabel::confidence_distorting, false, false};
    const bool negligible_deltas =
        std::abs(d.d_correct) <= t.eps_delta && std::abs(d.d_f1) <= t.eps_delta &&
        std::abs(d.d_grounding) <= t.eps_delta && std::abs(d.d_conf_error) <= t.eps_delta;
    if (negligible_deltas && d.trace_div <= t.eps_div)
        return {RoleLabel::redundant, false, false};
    return {RoleLabel::unclassified, false, false};
}

}  // namespace ragprobe
