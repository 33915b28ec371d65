#pragma once

#include <cmath>
#include <cstdint>

#include "iotrisk/errors.hpp"

namespace iotrisk {

// Device-population counts behind a fleet-level vulnerable fraction.
struct FleetStats {
    std::uint64_t total_devices = 1;
    std::uint64_t vulnerable_devices = 0;

    void validate() const {
        if (total_devices < 1)
            throw ValidationError("fleet total_devices must be >= 1");
        if (vulnerable_devices > total_devices)
            throw ValidationError(
                "fleet vulnerable_devices must not exceed total_devices");
    }
};

// Vulnerable fraction of the fleet, full precision. Reports round it to
// three decimals; computation never does.
inline double fleet_iotmm(const FleetStats& stats) {
    stats.validate();
    return static_cast<double>(stats.vulnerable_devices) /
           static_cast<double>(stats.total_devices);
}

// Fraction of scanned devices flagged as vulnerable.
inline double scan_vulnerability_rate(std::uint64_t scanned,
                                      std::uint64_t flagged) {
    if (scanned < 1)
        throw ValidationError("scanned device count must be >= 1");
    if (flagged > scanned)
        throw ValidationError("flagged count must not exceed scanned count");
    return static_cast<double>(flagged) / static_cast<double>(scanned);
}

// Per-micromort value implied by a total security spend: spend / 1e6.
// A guidance point, not a price: the underlying utility curve is only
// locally linear, so this holds for small incremental risks.
inline double value_of_one_iotmm(double total_security_spending) {
    if (!(std::isfinite(total_security_spending) &&
          total_security_spending >= 0.0))
        throw ValidationError("security spending must be finite and >= 0");
    return total_security_spending / 1e6;
}

struct WtpParams {
    double per_unit_wtp = 0.0;          // value of 1 IoTMM for one entity
    std::uint64_t population = 1;       // number of entities in the group
    double per_capita_risk_reduction = 1.0;

    void validate() const {
        if (!(std::isfinite(per_unit_wtp) && per_unit_wtp >= 0.0))
            throw ValidationError("per-unit WTP must be finite and >= 0");
        if (population < 1)
            throw ValidationError("population must be >= 1");
        if (!(per_capita_risk_reduction > 0.0 &&
              per_capita_risk_reduction <= 1.0))
            throw ValidationError(
                "per-capita risk reduction must lie in (0,1]");
    }
};

struct GroupWtpResult {
    double total = 0.0;
    // The group total removes exactly one statistical digital death only
    // when per-capita reduction x population = 1. Off by more than 1e-6
    // relative raises this flag; callers surface it as a warning.
    bool reduction_consistent = true;
};

// Group willingness-to-pay: per-entity WTP times population.
inline GroupWtpResult group_wtp(const WtpParams& params) {
    params.validate();
    GroupWtpResult r;
    r.total = params.per_unit_wtp * static_cast<double>(params.population);
    const double deaths_removed = params.per_capita_risk_reduction *
                                  static_cast<double>(params.population);
    r.reduction_consistent = std::abs(deaths_removed - 1.0) <= 1e-6;
    return r;
}

}  // namespace iotrisk
