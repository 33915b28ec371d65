#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "iotrisk/detail/numeric.hpp"
#include "iotrisk/errors.hpp"

namespace iotrisk {

inline constexpr double kMicromortsPerUnit = 1e6;
// Smallest control effectiveness accepted at parse time (division guard).
inline constexpr double kMinControlEffectiveness = 1e-9;

// One undesirable event: description, probability and monetary consequence.
struct RiskScenario {
    std::string description;
    double probability = 0.0;
    double consequence = 0.0;

    void validate() const {
        if (!(probability >= 0.0 && probability <= 1.0))
            throw ValidationError("scenario '" + description +
                                  "': probability must lie in [0,1]");
        if (!(std::isfinite(consequence) && consequence >= 0.0))
            throw ValidationError("scenario '" + description +
                                  "': consequence must be finite and >= 0");
    }
};

struct ScenarioSet {
    std::vector<RiskScenario> scenarios;

    void validate() const {
        for (const auto& s : scenarios) s.validate();
    }
};

// Likelihood times consequences.
inline double scenario_risk(const RiskScenario& s) {
    s.validate();
    return s.probability * s.consequence;
}

// Probability-weighted consequence over the whole set.
inline double expected_consequence(const ScenarioSet& set) {
    std::vector<double> terms;
    terms.reserve(set.scenarios.size());
    for (const auto& s : set.scenarios) terms.push_back(scenario_risk(s));
    return detail::neumaier_sum(terms);
}

// Residual risk = inherent risk / control effectiveness, unclamped. The
// quotient keeps whatever unit the caller's inherent risk carries.
inline double residual_risk(double inherent_risk, double control_effectiveness) {
    if (!(control_effectiveness > 0.0))
        throw ZeroControlError("control effectiveness must be > 0");
    if (!(std::isfinite(inherent_risk) && inherent_risk >= 0.0))
        throw ValidationError("inherent risk must be finite and >= 0");
    return inherent_risk / control_effectiveness;
}

// Factor groups of a risk profile. The technological / non-technological
// tags are descriptive only; no formula consumes them. Inherent risk here is
// a micromort rate, so the profile's residual risk is one too.
struct RiskFactorProfile {
    std::vector<std::string> technological;
    std::vector<std::string> non_technological;
    double inherent_risk = 0.0;
    double control_effectiveness = 1.0;

    void validate() const {
        if (!(std::isfinite(inherent_risk) && inherent_risk >= 0.0))
            throw ValidationError("inherent risk must be finite and >= 0");
        if (!(control_effectiveness >= kMinControlEffectiveness) ||
            !std::isfinite(control_effectiveness))
            throw ValidationError("control effectiveness must be finite and >= " +
                                  std::to_string(kMinControlEffectiveness));
    }

    double residual() const {
        return residual_risk(inherent_risk, control_effectiveness);
    }
};

// One micromort = 1e-6 probability of digital death over the horizon.
struct MicromortRate {
    double micromorts = 0.0;

    void validate() const {
        if (!(std::isfinite(micromorts) && micromorts >= 0.0))
            throw ValidationError("micromort rate must be finite and >= 0");
    }

    double as_probability() const {
        return std::min(micromorts / kMicromortsPerUnit, 1.0);
    }

    // True when as_probability() had to clamp at certainty.
    bool clamps() const { return micromorts > kMicromortsPerUnit; }
};

inline MicromortRate to_micromorts(double probability) {
    if (!(probability >= 0.0 && probability <= 1.0))
        throw OutOfRangeError("probability must lie in [0,1]");
    return MicromortRate{probability * kMicromortsPerUnit};
}

inline double from_micromorts(const MicromortRate& rate) {
    rate.validate();
    return rate.as_probability();
}

}  // namespace iotrisk
