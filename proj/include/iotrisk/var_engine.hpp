#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "iotrisk/detail/numeric.hpp"
#include "iotrisk/errors.hpp"
#include "iotrisk/risk_model.hpp"
#include "iotrisk/rng.hpp"
#include "iotrisk/version.hpp"

namespace iotrisk {

using Money = double;

// 2^20 subsets is the ceiling for exact enumeration; larger inventories must
// use Monte Carlo.
inline constexpr std::size_t kEnumerationLimit = 20;

// One asset's contribution to the VaR aggregate: its value and the residual
// digital-death rate it is exposed to.
struct Exposure {
    std::string asset_id;
    Money value = 0.0;
    MicromortRate residual_rate;

    void validate() const {
        if (!(std::isfinite(value) && value >= 0.0))
            throw ValidationError("exposure '" + asset_id +
                                  "': value must be finite and >= 0");
        residual_rate.validate();
    }
};

struct SimConfig {
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    int horizon_months = 12;
    double confidence = 0.95;

    void validate() const {
        if (trials < 1) throw ValidationError("trials must be >= 1");
        if (horizon_months < 1)
            throw ValidationError("horizon_months must be >= 1");
        if (!(confidence > 0.0 && confidence < 1.0))
            throw ValidationError("confidence must lie in (0,1)");
    }
};

struct DistributionMeta {
    std::string source;     // monte_carlo | historical | enumeration
    std::string generator;  // set for monte_carlo only
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
};

struct LossAtom {
    Money loss = 0.0;
    double probability = 0.0;
};

// A loss distribution, either an exact atom set (enumeration) or an
// equal-weight empirical sample (Monte Carlo / historical). Immutable after
// construction.
class LossDistribution {
public:
    enum class Kind { Exact, Empirical };

    static LossDistribution exact(std::vector<LossAtom> atoms,
                                  DistributionMeta meta) {
        if (atoms.empty())
            throw ValidationError("exact distribution needs at least one atom");
        std::vector<double> probs;
        probs.reserve(atoms.size());
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const auto& a = atoms[i];
            if (!(std::isfinite(a.loss) && a.loss >= 0.0))
                throw ValidationError("atom losses must be finite and >= 0");
            if (!(a.probability > 0.0 && a.probability <= 1.0))
                throw ValidationError("atom probabilities must lie in (0,1]");
            if (i > 0 && !(atoms[i - 1].loss < a.loss))
                throw ValidationError(
                    "atom losses must be distinct and sorted ascending");
            probs.push_back(a.probability);
        }
        if (std::abs(detail::neumaier_sum(probs) - 1.0) > 1e-12)
            throw ValidationError("atom probabilities must sum to 1");
        LossDistribution d;
        d.kind_ = Kind::Exact;
        d.atoms_ = std::move(atoms);
        d.meta_ = std::move(meta);
        return d;
    }

    static LossDistribution empirical(std::vector<double> samples,
                                      DistributionMeta meta) {
        if (samples.empty()) throw EmptyHistoryError("no loss samples");
        for (double s : samples)
            if (!(std::isfinite(s) && s >= 0.0))
                throw ValidationError("samples must be finite and >= 0");
        LossDistribution d;
        d.kind_ = Kind::Empirical;
        d.samples_ = std::move(samples);
        d.meta_ = std::move(meta);
        return d;
    }

    Kind kind() const { return kind_; }
    const std::vector<LossAtom>& atoms() const { return atoms_; }
    const std::vector<double>& samples() const { return samples_; }
    const DistributionMeta& meta() const { return meta_; }

    double mean() const {
        if (kind_ == Kind::Exact) {
            std::vector<double> terms;
            terms.reserve(atoms_.size());
            for (const auto& a : atoms_) terms.push_back(a.loss * a.probability);
            return detail::neumaier_sum(terms);
        }
        return detail::neumaier_sum(samples_) /
               static_cast<double>(samples_.size());
    }

private:
    LossDistribution() = default;

    Kind kind_ = Kind::Empirical;
    std::vector<LossAtom> atoms_;
    std::vector<double> samples_;
    DistributionMeta meta_;
};

// Linear VaR aggregate: sum of value_i x death-probability_i. This is also
// the expected loss of the independent-Bernoulli model below.
inline Money linear_var(std::span<const Exposure> exposures) {
    std::vector<double> terms;
    terms.reserve(exposures.size());
    for (const auto& e : exposures) {
        e.validate();
        terms.push_back(e.value * e.residual_rate.as_probability());
    }
    return detail::stable_sum(std::move(terms));
}

// Exact loss distribution of independent Bernoulli digital deaths, built by
// folding assets into the atom set one at a time (equivalent to enumerating
// all 2^n death subsets, then merging equal losses). Loss sums accumulate in
// ascending asset order, matching the Monte Carlo engine bit for bit.
inline LossDistribution exact_distribution(std::span<const Exposure> exposures) {
    if (exposures.size() > kEnumerationLimit)
        throw TooManyAssetsError(
            "exact enumeration is limited to " +
            std::to_string(kEnumerationLimit) + " assets, got " +
            std::to_string(exposures.size()));

    std::vector<LossAtom> atoms{{0.0, 1.0}};
    std::vector<LossAtom> merged;
    for (const auto& e : exposures) {
        e.validate();
        const double p = e.residual_rate.as_probability();
        if (p == 0.0 || e.value == 0.0) continue;  // cannot move any loss mass

        merged.clear();
        merged.reserve(atoms.size() * 2);
        // two sorted runs: survivors keep their loss, deaths shift by value
        std::size_t i = 0, j = 0;
        const double q = 1.0 - p;
        auto survivor = [&](std::size_t k) {
            return LossAtom{atoms[k].loss, atoms[k].probability * q};
        };
        auto death = [&](std::size_t k) {
            return LossAtom{atoms[k].loss + e.value, atoms[k].probability * p};
        };
        auto push = [&](LossAtom a) {
            if (a.probability <= 0.0) return;
            if (!merged.empty() && merged.back().loss == a.loss)
                merged.back().probability += a.probability;
            else
                merged.push_back(a);
        };
        while (i < atoms.size() && j < atoms.size()) {
            if (survivor(i).loss <= death(j).loss)
                push(survivor(i++));
            else
                push(death(j++));
        }
        while (i < atoms.size()) push(survivor(i++));
        while (j < atoms.size()) push(death(j++));
        atoms.swap(merged);
    }
    return LossDistribution::exact(
        std::move(atoms),
        DistributionMeta{.source = "enumeration", .generator = {}, .seed = {}, .trials = {}});
}

namespace detail {

// Per-asset death probability over the configured horizon. Rates are defined
// per 12 months; other horizons assume geometric survival.
inline std::vector<double> horizon_probabilities(
    std::span<const Exposure> exposures, int horizon_months) {
    std::vector<double> probs;
    probs.reserve(exposures.size());
    for (const auto& e : exposures) {
        double p = e.residual_rate.as_probability();
        if (horizon_months != 12)
            p = 1.0 - std::pow(1.0 - p, horizon_months / 12.0);
        probs.push_back(p);
    }
    return probs;
}

}  // namespace detail

// Monte Carlo loss samples. Trial t draws one uniform per asset from the
// counter-based generator keyed by (seed, t, asset index), so the sample
// multiset depends only on (exposures, config) -- not on thread count or
// scheduling. threads = 0 picks hardware concurrency.
inline LossDistribution simulate_losses(std::span<const Exposure> exposures,
                                        const SimConfig& config,
                                        unsigned threads = 1) {
    config.validate();
    for (const auto& e : exposures) e.validate();

    const std::vector<double> probs =
        detail::horizon_probabilities(exposures, config.horizon_months);
    std::vector<double> values;
    values.reserve(exposures.size());
    for (const auto& e : exposures) values.push_back(e.value);

    std::vector<double> samples(config.trials);
    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            double loss = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double u = uniform_draw(config.seed, t,
                                              static_cast<std::uint32_t>(i));
                if (u < probs[i]) loss += values[i];
            }
            samples[t] = loss;
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || config.trials < 2) {
        run_range(0, config.trials);
    } else {
        const std::uint64_t n = config.trials;
        const std::uint64_t per = (n + threads - 1) / threads;
        std::vector<std::thread> pool;
        for (std::uint64_t begin = 0; begin < n; begin += per)
            pool.emplace_back(run_range, begin, std::min(begin + per, n));
        for (auto& th : pool) th.join();
    }

    return LossDistribution::empirical(
        std::move(samples),
        DistributionMeta{.source = "monte_carlo",
                         .generator = kGeneratorId,
                         .seed = config.seed,
                         .trials = config.trials});
}

// Equal-weight distribution over an observed loss record, order preserved.
inline LossDistribution historical_distribution(std::vector<double> losses) {
    if (losses.empty()) throw EmptyHistoryError("loss history is empty");
    return LossDistribution::empirical(
        std::move(losses),
        DistributionMeta{.source = "historical", .generator = {}, .seed = {}, .trials = {}});
}

// Smallest loss L with P(loss <= L) >= confidence. For empirical samples
// this is the ceil(confidence * n)-th order statistic.
inline Money var_at(const LossDistribution& dist, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw OutOfRangeError("confidence must lie in (0,1)");
    if (dist.kind() == LossDistribution::Kind::Exact) {
        double cum = 0.0;
        for (const auto& a : dist.atoms()) {
            cum += a.probability;
            if (cum >= confidence) return a.loss;
        }
        return dist.atoms().back().loss;  // mass fell short by rounding only
    }
    std::vector<double> sorted(dist.samples());
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();
    const auto nd = static_cast<double>(n);
    // Smallest k in [1,n] with k/n >= confidence, where k/n is evaluated in
    // double precision exactly as the empirical CDF is. A bare
    // ceil(confidence * n) can land one step off when the product rounds
    // across an integer (e.g. 0.8 * 5 evaluates above 4).
    auto k = static_cast<std::size_t>(std::ceil(confidence * nd));
    k = std::clamp<std::size_t>(k, 1, n);
    while (k > 1 && static_cast<double>(k - 1) / nd >= confidence) --k;
    while (k < n && static_cast<double>(k) / nd < confidence) ++k;
    return sorted[k - 1];
}

struct VaRCurve {
    struct Point {
        double confidence = 0.0;
        Money loss = 0.0;
    };
    std::vector<Point> points;
};

// Quantile function sampled over a strictly increasing confidence grid.
inline VaRCurve var_curve(const LossDistribution& dist,
                          std::span<const double> grid) {
    if (grid.empty()) throw BadGridError("confidence grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0))
            throw BadGridError("grid confidences must lie in (0,1)");
        if (i > 0 && !(grid[i - 1] < grid[i]))
            throw BadGridError("grid must be strictly increasing");
    }
    VaRCurve curve;
    curve.points.reserve(grid.size());
    for (double alpha : grid)
        curve.points.push_back({alpha, var_at(dist, alpha)});
    return curve;
}

// The 12-month loss limit at the configured confidence, plus the magnitude
// of a 1% reduction. What that reduction is worth is a declared preference,
// echoed but never derived.
struct IoTMM2Report {
    int horizon_months = 12;
    double confidence = 0.95;
    Money loss_limit = 0.0;
    Money one_percent_reduction = 0.0;
    std::optional<Money> declared_wtp_for_reduction;
};

inline IoTMM2Report iotmm2_report(const LossDistribution& dist,
                                  const SimConfig& config,
                                  std::optional<Money> declared_wtp = {}) {
    config.validate();
    if (config.horizon_months != 12)
        throw WrongHorizonError("the IoTMM2 loss limit is defined over a "
                                "12-month horizon, got " +
                                std::to_string(config.horizon_months));
    IoTMM2Report r;
    r.horizon_months = config.horizon_months;
    r.confidence = config.confidence;
    r.loss_limit = var_at(dist, config.confidence);
    r.one_percent_reduction = r.loss_limit / 100.0;
    r.declared_wtp_for_reduction = declared_wtp;
    return r;
}

}  // namespace iotrisk
