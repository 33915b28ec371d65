#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "iotrisk/detail/numeric.hpp"
#include "iotrisk/errors.hpp"

namespace iotrisk {

// Money is a finite nonnegative double in one scenario-level currency.
using Money = double;

enum class AssetCategory { CoreValue, Operational };

// Origin applies to core-value assets only: digitised from a physical
// counterpart, or born digital. Operational assets carry NotApplicable.
enum class AssetOrigin { Digitised, BornDigital, NotApplicable };

enum class ValuationBasis { Market, Intrinsic, Subjective };

// An asset-class label in the scenario-local taxonomy registry.
struct AssetClass {
    std::string code;
    AssetCategory category = AssetCategory::Operational;
    AssetOrigin origin = AssetOrigin::NotApplicable;

    static AssetClass core(std::string code, AssetOrigin origin) {
        AssetClass c{std::move(code), AssetCategory::CoreValue, origin};
        c.validate();
        return c;
    }
    static AssetClass operational(std::string code) {
        AssetClass c{std::move(code), AssetCategory::Operational,
                     AssetOrigin::NotApplicable};
        c.validate();
        return c;
    }

    void validate() const {
        if (code.empty())
            throw ValidationError("asset class code must be nonempty");
        const bool core_value = category == AssetCategory::CoreValue;
        const bool has_origin = origin != AssetOrigin::NotApplicable;
        if (core_value != has_origin)
            throw ValidationError(
                "asset class '" + code +
                "': origin must be digitised/born_digital for core-value "
                "classes and not_applicable for operational ones");
    }
};

// Up to three valuation bases; at least one must be present. BIA valuations
// of operational assets are carried on the subjective basis.
struct Valuation {
    std::optional<Money> intrinsic;
    std::optional<Money> market;
    std::optional<Money> subjective;

    void validate() const {
        if (!intrinsic && !market && !subjective)
            throw ValidationError("valuation needs at least one basis");
        for (const auto& [name, v] :
             {std::pair{"intrinsic", intrinsic}, {"market", market},
              {"subjective", subjective}}) {
            if (v && !(std::isfinite(*v) && *v >= 0.0))
                throw ValidationError(std::string(name) +
                                      " value must be finite and >= 0");
        }
    }

    std::optional<Money> basis(ValuationBasis b) const {
        switch (b) {
            case ValuationBasis::Market: return market;
            case ValuationBasis::Intrinsic: return intrinsic;
            case ValuationBasis::Subjective: return subjective;
        }
        return std::nullopt;
    }
};

struct Asset {
    std::string id;
    AssetClass asset_class;
    Valuation valuation;
    // Asset-level residual risk in micromorts. When absent the scenario's
    // risk profile supplies it.
    std::optional<double> residual_micromorts;

    void validate() const {
        if (id.empty()) throw ValidationError("asset id must be nonempty");
        asset_class.validate();
        valuation.validate();
        if (residual_micromorts &&
            !(std::isfinite(*residual_micromorts) && *residual_micromorts >= 0.0))
            throw ValidationError("asset '" + id +
                                  "': residual rate must be finite and >= 0");
    }

    bool is_core() const {
        return asset_class.category == AssetCategory::CoreValue;
    }
};

class Inventory {
public:
    Inventory() = default;
    explicit Inventory(std::vector<Asset> assets) : assets_(std::move(assets)) {
        std::unordered_set<std::string> seen;
        for (const auto& a : assets_) {
            a.validate();
            if (!seen.insert(a.id).second)
                throw ValidationError("duplicate asset id '" + a.id + "'");
        }
    }

    const std::vector<Asset>& assets() const { return assets_; }
    std::size_t size() const { return assets_.size(); }
    bool empty() const { return assets_.empty(); }

    std::size_t core_count() const {
        std::size_t n = 0;
        for (const auto& a : assets_) n += a.is_core() ? 1 : 0;
        return n;
    }
    std::size_t operational_count() const { return size() - core_count(); }

    const Asset* find(const std::string& id) const {
        for (const auto& a : assets_)
            if (a.id == id) return &a;
        return nullptr;
    }

private:
    std::vector<Asset> assets_;
};

// The default basis order puts market first: it is the only externally
// observable basis.
inline const std::vector<ValuationBasis>& default_valuation_policy() {
    static const std::vector<ValuationBasis> policy = {
        ValuationBasis::Market, ValuationBasis::Intrinsic,
        ValuationBasis::Subjective};
    return policy;
}

// First basis in `policy` present on the asset.
inline Money value_of(const Asset& asset,
                      std::span<const ValuationBasis> policy) {
    if (policy.empty())
        throw ValidationError("valuation policy must be nonempty");
    for (ValuationBasis b : policy) {
        if (auto v = asset.valuation.basis(b)) return *v;
    }
    throw NoValuationError(asset.id);
}

inline Money value_of(const Asset& asset) {
    return value_of(asset, default_valuation_policy());
}

// Total digital value: sum of core-asset values plus operational-asset
// values. Summation runs over a canonical ordering, so the result does not
// depend on the inventory's asset order.
inline Money total_value(const Inventory& inventory,
                         std::span<const ValuationBasis> policy) {
    std::vector<double> values;
    values.reserve(inventory.size());
    for (const auto& a : inventory.assets()) values.push_back(value_of(a, policy));
    return detail::stable_sum(std::move(values));
}

inline Money total_value(const Inventory& inventory) {
    return total_value(inventory, default_valuation_policy());
}

enum class CompositionAxis { CoreToOperational, DigitisedToBornDigital };

// Value and count totals of the two sides of a composition axis. Ratios are
// explicitly undefined (not infinity, not an error) when a denominator is
// zero: single-category inventories are legitimate.
struct CompositionRatio {
    Money numerator_total = 0.0;
    Money denominator_total = 0.0;
    std::size_t numerator_count = 0;
    std::size_t denominator_count = 0;
    std::optional<double> value_ratio;
    std::optional<double> count_ratio;
};

inline CompositionRatio composition_ratio(
    const Inventory& inventory, CompositionAxis axis,
    std::span<const ValuationBasis> policy) {
    if (inventory.empty())
        throw ValidationError("composition ratio needs a nonempty inventory");

    std::vector<double> num_values, den_values;
    CompositionRatio r;
    for (const auto& a : inventory.assets()) {
        bool in_numerator;
        if (axis == CompositionAxis::CoreToOperational) {
            in_numerator = a.is_core();
        } else {
            // digitised : born-digital is a split of the core assets only
            if (!a.is_core()) continue;
            in_numerator = a.asset_class.origin == AssetOrigin::Digitised;
        }
        const Money v = value_of(a, policy);
        if (in_numerator) {
            num_values.push_back(v);
            ++r.numerator_count;
        } else {
            den_values.push_back(v);
            ++r.denominator_count;
        }
    }
    r.numerator_total = detail::stable_sum(std::move(num_values));
    r.denominator_total = detail::stable_sum(std::move(den_values));
    if (r.denominator_total != 0.0)
        r.value_ratio = r.numerator_total / r.denominator_total;
    if (r.denominator_count != 0)
        r.count_ratio = static_cast<double>(r.numerator_count) /
                        static_cast<double>(r.denominator_count);
    return r;
}

inline CompositionRatio composition_ratio(const Inventory& inventory,
                                          CompositionAxis axis) {
    return composition_ratio(inventory, axis, default_valuation_policy());
}

}  // namespace iotrisk
