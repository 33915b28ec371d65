#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iotrisk/asset_model.hpp"
#include "iotrisk/errors.hpp"
#include "iotrisk/micromort.hpp"
#include "iotrisk/render.hpp"
#include "iotrisk/risk_model.hpp"
#include "iotrisk/var_engine.hpp"
#include "iotrisk/version.hpp"

namespace iotrisk {

using json = nlohmann::ordered_json;

inline constexpr int kScenarioSchemaVersion = 1;

// A residual-risk source for one asset: either an explicit micromort rate or
// a factor profile whose residual rate is inherent / control.
using RiskSource = std::variant<MicromortRate, RiskFactorProfile>;

// One self-contained input unit: inventory, risk, fleet and simulation
// settings. Everything a report prints is derived from this plus the
// provenance block.
struct ScenarioDocument {
    std::string name;
    std::string currency = "USD";
    Inventory inventory;
    std::map<std::string, RiskSource> risk_profiles;
    std::optional<FleetStats> fleet;
    std::optional<WtpParams> wtp;
    SimConfig sim{.trials = 10000, .seed = 0, .horizon_months = 12,
                  .confidence = 0.95};
    std::vector<ValuationBasis> valuation_policy = default_valuation_policy();

    void validate() const {
        if (currency.empty())
            throw ValidationError("currency tag must be nonempty");
        sim.validate();
        if (valuation_policy.empty())
            throw ValidationError("valuation policy must be nonempty");
        if (fleet) fleet->validate();
        if (wtp) wtp->validate();
        for (const auto& [id, source] : risk_profiles) {
            if (inventory.find(id) == nullptr)
                throw DanglingReferenceError(
                    "risk profile references unknown asset '" + id + "'");
            std::visit([](const auto& s) { s.validate(); }, source);
        }
        for (const auto& a : inventory.assets()) {
            if (!a.residual_micromorts && !risk_profiles.contains(a.id))
                throw ValidationError(
                    "asset '" + a.id +
                    "' has no residual rate and no risk profile");
        }
    }
};

// Residual rate for one asset: the asset-level rate wins, a risk profile
// fills in when absent.
inline MicromortRate resolved_rate(const ScenarioDocument& doc, const Asset& a) {
    if (a.residual_micromorts) return MicromortRate{*a.residual_micromorts};
    auto it = doc.risk_profiles.find(a.id);
    if (it == doc.risk_profiles.end())
        throw ValidationError("asset '" + a.id + "' has no residual rate");
    if (const auto* rate = std::get_if<MicromortRate>(&it->second)) return *rate;
    return MicromortRate{std::get<RiskFactorProfile>(it->second).residual()};
}

inline std::vector<Exposure> build_exposures(const ScenarioDocument& doc) {
    std::vector<Exposure> exposures;
    exposures.reserve(doc.inventory.size());
    for (const auto& a : doc.inventory.assets())
        exposures.push_back({a.id, value_of(a, doc.valuation_policy),
                             resolved_rate(doc, a)});
    return exposures;
}

// ---------------------------------------------------------------------------
// enum <-> string names used by the file format

inline std::string to_string(ValuationBasis b) {
    switch (b) {
        case ValuationBasis::Market: return "market";
        case ValuationBasis::Intrinsic: return "intrinsic";
        case ValuationBasis::Subjective: return "subjective";
    }
    return "?";
}

inline ValuationBasis parse_basis(const std::string& s) {
    if (s == "market") return ValuationBasis::Market;
    if (s == "intrinsic") return ValuationBasis::Intrinsic;
    if (s == "subjective") return ValuationBasis::Subjective;
    throw ParseError("unknown valuation basis '" + s + "'");
}

inline std::vector<ValuationBasis> parse_policy(const std::string& csv) {
    std::vector<ValuationBasis> policy;
    std::stringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) policy.push_back(parse_basis(part));
    }
    if (policy.empty())
        throw ParseError("valuation policy must name at least one basis");
    for (std::size_t i = 0; i < policy.size(); ++i)
        for (std::size_t j = i + 1; j < policy.size(); ++j)
            if (policy[i] == policy[j])
                throw ParseError("valuation policy repeats a basis");
    return policy;
}

inline std::string to_string(AssetCategory c) {
    return c == AssetCategory::CoreValue ? "core_value" : "operational";
}

inline AssetCategory parse_category(const std::string& s) {
    if (s == "core_value") return AssetCategory::CoreValue;
    if (s == "operational") return AssetCategory::Operational;
    throw ParseError("unknown asset category '" + s + "'");
}

inline std::string to_string(AssetOrigin o) {
    switch (o) {
        case AssetOrigin::Digitised: return "digitised";
        case AssetOrigin::BornDigital: return "born_digital";
        case AssetOrigin::NotApplicable: return "not_applicable";
    }
    return "?";
}

inline AssetOrigin parse_origin(const std::string& s) {
    if (s == "digitised") return AssetOrigin::Digitised;
    if (s == "born_digital") return AssetOrigin::BornDigital;
    if (s == "not_applicable") return AssetOrigin::NotApplicable;
    throw ParseError("unknown asset origin '" + s + "'");
}

// ---------------------------------------------------------------------------
// json helpers: schema violations become ParseError naming the field

namespace detail {

inline const json& require_field(const json& j, const std::string& key,
                                 const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError("missing field '" + key + "' in " + where);
    return j.at(key);
}

inline double as_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ParseError("field '" + field + "' must be a number");
    return j.get<double>();
}

inline std::uint64_t as_uint(const json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<double>() < 0)
        throw ParseError("field '" + field +
                         "' must be a nonnegative integer");
    return j.get<std::uint64_t>();
}

inline std::string as_string(const json& j, const std::string& field) {
    if (!j.is_string()) throw ParseError("field '" + field + "' must be a string");
    return j.get<std::string>();
}

inline std::vector<std::string> as_string_list(const json& j,
                                               const std::string& field) {
    if (!j.is_array()) throw ParseError("field '" + field + "' must be a list");
    std::vector<std::string> out;
    for (const auto& e : j) out.push_back(as_string(e, field));
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// document <-> json

inline json scenario_to_json(const ScenarioDocument& doc) {
    json j;
    j["schema_version"] = kScenarioSchemaVersion;
    j["name"] = doc.name;
    j["currency"] = doc.currency;
    json policy = json::array();
    for (auto b : doc.valuation_policy) policy.push_back(to_string(b));
    j["valuation_policy"] = std::move(policy);

    json assets = json::array();
    for (const auto& a : doc.inventory.assets()) {
        json ja;
        ja["id"] = a.id;
        ja["class"] = {{"code", a.asset_class.code},
                       {"category", to_string(a.asset_class.category)},
                       {"origin", to_string(a.asset_class.origin)}};
        json val = json::object();
        if (a.valuation.intrinsic) val["intrinsic"] = *a.valuation.intrinsic;
        if (a.valuation.market) val["market"] = *a.valuation.market;
        if (a.valuation.subjective) val["subjective"] = *a.valuation.subjective;
        ja["valuation"] = std::move(val);
        if (a.residual_micromorts)
            ja["residual_micromorts"] = *a.residual_micromorts;
        assets.push_back(std::move(ja));
    }
    j["assets"] = std::move(assets);

    json profiles = json::object();
    for (const auto& [id, source] : doc.risk_profiles) {
        if (const auto* rate = std::get_if<MicromortRate>(&source)) {
            profiles[id] = {{"micromorts", rate->micromorts}};
        } else {
            const auto& p = std::get<RiskFactorProfile>(source);
            profiles[id] = {{"technological", p.technological},
                            {"non_technological", p.non_technological},
                            {"inherent_risk", p.inherent_risk},
                            {"control_effectiveness", p.control_effectiveness}};
        }
    }
    j["risk_profiles"] = std::move(profiles);

    if (doc.fleet)
        j["fleet"] = {{"total_devices", doc.fleet->total_devices},
                      {"vulnerable_devices", doc.fleet->vulnerable_devices}};
    if (doc.wtp)
        j["wtp"] = {{"per_unit_wtp", doc.wtp->per_unit_wtp},
                    {"population", doc.wtp->population},
                    {"per_capita_risk_reduction",
                     doc.wtp->per_capita_risk_reduction}};
    j["sim"] = {{"trials", doc.sim.trials},
                {"seed", doc.sim.seed},
                {"horizon_months", doc.sim.horizon_months},
                {"confidence", doc.sim.confidence}};
    return j;
}

inline ScenarioDocument scenario_from_json(const json& j) {
    using detail::as_number;
    using detail::as_string;
    using detail::as_uint;
    using detail::require_field;

    if (!j.is_object()) throw ParseError("scenario document must be an object");
    const auto version =
        as_uint(require_field(j, "schema_version", "document"), "schema_version");
    if (version != kScenarioSchemaVersion)
        throw ParseError("unsupported schema_version " + std::to_string(version));

    ScenarioDocument doc;
    doc.name = as_string(require_field(j, "name", "document"), "name");
    doc.currency = as_string(require_field(j, "currency", "document"), "currency");

    if (j.contains("valuation_policy")) {
        const auto& jp = j.at("valuation_policy");
        if (!jp.is_array() || jp.empty())
            throw ParseError("field 'valuation_policy' must be a nonempty list");
        doc.valuation_policy.clear();
        for (const auto& e : jp)
            doc.valuation_policy.push_back(
                parse_basis(as_string(e, "valuation_policy")));
        for (std::size_t a = 0; a < doc.valuation_policy.size(); ++a)
            for (std::size_t b = a + 1; b < doc.valuation_policy.size(); ++b)
                if (doc.valuation_policy[a] == doc.valuation_policy[b])
                    throw ParseError("valuation policy repeats a basis");
    }

    const auto& ja = require_field(j, "assets", "document");
    if (!ja.is_array()) throw ParseError("field 'assets' must be a list");
    std::vector<Asset> assets;
    for (const auto& e : ja) {
        Asset a;
        a.id = as_string(require_field(e, "id", "asset"), "id");
        const auto& jc = require_field(e, "class", "asset '" + a.id + "'");
        a.asset_class.code =
            as_string(require_field(jc, "code", "class"), "code");
        a.asset_class.category = parse_category(
            as_string(require_field(jc, "category", "class"), "category"));
        a.asset_class.origin =
            jc.contains("origin")
                ? parse_origin(as_string(jc.at("origin"), "origin"))
                : AssetOrigin::NotApplicable;
        const auto& jv = require_field(e, "valuation", "asset '" + a.id + "'");
        if (!jv.is_object())
            throw ParseError("field 'valuation' must be an object");
        if (jv.contains("intrinsic"))
            a.valuation.intrinsic = as_number(jv.at("intrinsic"), "intrinsic");
        if (jv.contains("market"))
            a.valuation.market = as_number(jv.at("market"), "market");
        if (jv.contains("subjective"))
            a.valuation.subjective = as_number(jv.at("subjective"), "subjective");
        if (e.contains("residual_micromorts"))
            a.residual_micromorts =
                as_number(e.at("residual_micromorts"), "residual_micromorts");
        assets.push_back(std::move(a));
    }
    doc.inventory = Inventory(std::move(assets));

    if (j.contains("risk_profiles")) {
        const auto& jr = j.at("risk_profiles");
        if (!jr.is_object())
            throw ParseError("field 'risk_profiles' must be an object");
        for (const auto& [id, e] : jr.items()) {
            if (e.contains("micromorts")) {
                doc.risk_profiles.emplace(
                    id, MicromortRate{as_number(e.at("micromorts"),
                                                "micromorts")});
            } else {
                RiskFactorProfile p;
                if (e.contains("technological"))
                    p.technological =
                        detail::as_string_list(e.at("technological"),
                                               "technological");
                if (e.contains("non_technological"))
                    p.non_technological =
                        detail::as_string_list(e.at("non_technological"),
                                               "non_technological");
                p.inherent_risk = as_number(
                    require_field(e, "inherent_risk", "risk profile '" + id + "'"),
                    "inherent_risk");
                p.control_effectiveness =
                    as_number(require_field(e, "control_effectiveness",
                                            "risk profile '" + id + "'"),
                              "control_effectiveness");
                doc.risk_profiles.emplace(id, std::move(p));
            }
        }
    }

    if (j.contains("fleet")) {
        const auto& jf = j.at("fleet");
        FleetStats fleet;
        fleet.total_devices =
            as_uint(require_field(jf, "total_devices", "fleet"), "total_devices");
        fleet.vulnerable_devices =
            as_uint(require_field(jf, "vulnerable_devices", "fleet"),
                    "vulnerable_devices");
        doc.fleet = fleet;
    }
    if (j.contains("wtp")) {
        const auto& jw = j.at("wtp");
        WtpParams wtp;
        wtp.per_unit_wtp =
            as_number(require_field(jw, "per_unit_wtp", "wtp"), "per_unit_wtp");
        wtp.population =
            as_uint(require_field(jw, "population", "wtp"), "population");
        wtp.per_capita_risk_reduction =
            as_number(require_field(jw, "per_capita_risk_reduction", "wtp"),
                      "per_capita_risk_reduction");
        doc.wtp = wtp;
    }
    if (j.contains("sim")) {
        const auto& js = j.at("sim");
        if (js.contains("trials"))
            doc.sim.trials = as_uint(js.at("trials"), "trials");
        if (js.contains("seed")) doc.sim.seed = as_uint(js.at("seed"), "seed");
        if (js.contains("horizon_months"))
            doc.sim.horizon_months = static_cast<int>(
                as_uint(js.at("horizon_months"), "horizon_months"));
        if (js.contains("confidence"))
            doc.sim.confidence = as_number(js.at("confidence"), "confidence");
    }

    doc.validate();
    return doc;
}

// ---------------------------------------------------------------------------
// file i/o

inline ScenarioDocument load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario file '") + path +
                         "': " + e.what());
    }
    return scenario_from_json(j);
}

inline void save_scenario(const ScenarioDocument& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file '" + path + "'");
    out << scenario_to_json(doc).dump(2) << '\n';
}

// One nonnegative decimal per line; blank lines and '#' comments ignored.
inline std::vector<double> parse_loss_history(std::istream& in) {
    std::vector<double> losses;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#') continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(begin, end - begin + 1);
        double value = 0.0;
        const char* first = token.data();
        const char* last = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last)
            throw ParseError("expected a decimal loss, got '" + token + "'",
                             line_no);
        if (!(std::isfinite(value) && value >= 0.0))
            throw ParseError("losses must be finite and >= 0, got '" + token +
                             "'", line_no);
        losses.push_back(value);
    }
    if (losses.empty()) throw EmptyHistoryError("loss history is empty");
    return losses;
}

inline std::vector<double> load_loss_history(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open loss history '" + path + "'");
    return parse_loss_history(in);
}

// ---------------------------------------------------------------------------
// report

struct Provenance {
    std::string tool_version = kVersion;
    std::string generator = kGeneratorId;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int horizon_months = 12;
    double confidence = 0.95;
};

struct Report {
    ScenarioDocument scenario;
    Money total_value = 0.0;
    CompositionRatio core_to_operational;
    std::optional<CompositionRatio> digitised_to_born_digital;
    std::optional<double> fleet_fraction;
    Money linear_var_total = 0.0;
    VaRCurve curve;
    IoTMM2Report iotmm2;
    Provenance provenance;
};

// Confidence grid used when none is given: standard report points plus the
// scenario's own confidence level.
inline std::vector<double> default_confidence_grid(double confidence) {
    std::vector<double> grid = {0.5, 0.75, 0.9, 0.95, 0.99, 0.999};
    grid.push_back(confidence);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

// Runs the whole pipeline for one scenario document. Every number in the
// result is a function of (doc, provenance); threads only affect wall time.
inline Report build_report(const ScenarioDocument& doc,
                           std::optional<Money> declared_wtp = {},
                           unsigned threads = 1) {
    doc.validate();
    Report r;
    r.scenario = doc;
    r.total_value = total_value(doc.inventory, doc.valuation_policy);
    if (!doc.inventory.empty()) {
        r.core_to_operational = composition_ratio(
            doc.inventory, CompositionAxis::CoreToOperational,
            doc.valuation_policy);
        if (doc.inventory.core_count() > 0)
            r.digitised_to_born_digital = composition_ratio(
                doc.inventory, CompositionAxis::DigitisedToBornDigital,
                doc.valuation_policy);
    }
    if (doc.fleet) r.fleet_fraction = fleet_iotmm(*doc.fleet);

    const auto exposures = build_exposures(doc);
    r.linear_var_total = linear_var(exposures);

    const auto dist = simulate_losses(exposures, doc.sim, threads);
    const auto grid = default_confidence_grid(doc.sim.confidence);
    r.curve = var_curve(dist, grid);
    r.iotmm2 = iotmm2_report(dist, doc.sim, declared_wtp);

    r.provenance = Provenance{.tool_version = kVersion,
                              .generator = kGeneratorId,
                              .seed = doc.sim.seed,
                              .trials = doc.sim.trials,
                              .horizon_months = doc.sim.horizon_months,
                              .confidence = doc.sim.confidence};
    return r;
}

inline json composition_to_json(const CompositionRatio& r) {
    json j;
    j["numerator_total"] = r.numerator_total;
    j["denominator_total"] = r.denominator_total;
    j["numerator_count"] = r.numerator_count;
    j["denominator_count"] = r.denominator_count;
    j["value_ratio"] = r.value_ratio ? json(*r.value_ratio) : json(nullptr);
    j["count_ratio"] = r.count_ratio ? json(*r.count_ratio) : json(nullptr);
    return j;
}

inline json curve_to_json(const VaRCurve& curve) {
    json pts = json::array();
    for (const auto& p : curve.points)
        pts.push_back({{"confidence", p.confidence}, {"loss", p.loss}});
    return pts;
}

inline json provenance_to_json(const Provenance& p) {
    return {{"tool_version", p.tool_version}, {"generator", p.generator},
            {"seed", p.seed},                 {"trials", p.trials},
            {"horizon_months", p.horizon_months},
            {"confidence", p.confidence}};
}

inline json report_to_json(const Report& r) {
    json j;
    j["tool"] = "iotrisk";
    j["schema_version"] = kScenarioSchemaVersion;
    j["scenario"] = scenario_to_json(r.scenario);

    json results;
    results["total_value"] = r.total_value;
    results["total_value_rendered"] =
        render_money(r.total_value, r.scenario.currency);
    json comp;
    comp["core_to_operational"] = composition_to_json(r.core_to_operational);
    comp["digitised_to_born_digital"] =
        r.digitised_to_born_digital
            ? composition_to_json(*r.digitised_to_born_digital)
            : json(nullptr);
    results["composition"] = std::move(comp);
    if (r.fleet_fraction) {
        results["fleet_iotmm"] = {{"fraction", *r.fleet_fraction},
                                  {"rendered", render_fraction3(*r.fleet_fraction)}};
    } else {
        results["fleet_iotmm"] = nullptr;
    }
    results["linear_var"] = r.linear_var_total;
    results["linear_var_rendered"] =
        render_money(r.linear_var_total, r.scenario.currency);
    results["var_curve"] = curve_to_json(r.curve);
    json m2;
    m2["horizon_months"] = r.iotmm2.horizon_months;
    m2["confidence"] = r.iotmm2.confidence;
    m2["loss_limit"] = r.iotmm2.loss_limit;
    m2["loss_limit_rendered"] =
        render_money(r.iotmm2.loss_limit, r.scenario.currency);
    m2["one_percent_reduction"] = r.iotmm2.one_percent_reduction;
    m2["declared_wtp_for_reduction"] =
        r.iotmm2.declared_wtp_for_reduction
            ? json(*r.iotmm2.declared_wtp_for_reduction)
            : json(nullptr);
    results["iotmm2"] = std::move(m2);
    j["results"] = std::move(results);
    j["provenance"] = provenance_to_json(r.provenance);
    return j;
}

enum class ReportFormat { Structured, CurvePoints };

inline ReportFormat parse_format(const std::string& s) {
    if (s == "structured") return ReportFormat::Structured;
    if (s == "curve_points") return ReportFormat::CurvePoints;
    throw ParseError("unknown format '" + s +
                     "' (expected structured or curve_points)");
}

// Two-column text table for external plotting, full-precision decimals.
inline void write_curve_points(const VaRCurve& curve, std::ostream& out) {
    out << "confidence,loss\n";
    for (const auto& p : curve.points)
        out << render_full(p.confidence) << ',' << render_full(p.loss) << '\n';
}

inline void emit_report(const Report& r, ReportFormat format,
                        std::ostream& out) {
    if (format == ReportFormat::Structured)
        out << report_to_json(r).dump(2) << '\n';
    else
        write_curve_points(r.curve, out);
}

inline void emit_report(const Report& r, ReportFormat format,
                        const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report to '" + path + "'");
    emit_report(r, format, out);
    if (!out) throw IoError("failed while writing report to '" + path + "'");
}

// ---------------------------------------------------------------------------
// simulation artifact (the `simulate` command's output document)

struct SimulationArtifact {
    LossDistribution distribution;
    VaRCurve curve;
    SimConfig config;
};

inline json distribution_to_json(const LossDistribution& d) {
    json j;
    j["kind"] = d.kind() == LossDistribution::Kind::Exact ? "exact" : "empirical";
    json meta;
    meta["source"] = d.meta().source;
    if (!d.meta().generator.empty()) meta["generator"] = d.meta().generator;
    if (d.meta().seed) meta["seed"] = *d.meta().seed;
    if (d.meta().trials) meta["trials"] = *d.meta().trials;
    j["metadata"] = std::move(meta);
    if (d.kind() == LossDistribution::Kind::Exact) {
        json atoms = json::array();
        for (const auto& a : d.atoms())
            atoms.push_back({{"loss", a.loss}, {"probability", a.probability}});
        j["atoms"] = std::move(atoms);
    } else {
        j["samples"] = d.samples();
    }
    return j;
}

inline json simulation_to_json(const SimulationArtifact& art) {
    json j;
    j["tool"] = "iotrisk";
    j["schema_version"] = kScenarioSchemaVersion;
    j["distribution"] = distribution_to_json(art.distribution);
    j["var_curve"] = curve_to_json(art.curve);
    j["provenance"] = provenance_to_json(
        Provenance{.tool_version = kVersion,
                   .generator = art.distribution.meta().generator,
                   .seed = art.distribution.meta().seed.value_or(0),
                   .trials = art.distribution.meta().trials.value_or(
                       art.distribution.samples().size()),
                   .horizon_months = art.config.horizon_months,
                   .confidence = art.config.confidence});
    return j;
}

inline void emit_simulation(const SimulationArtifact& art, ReportFormat format,
                            std::ostream& out) {
    if (format == ReportFormat::Structured)
        out << simulation_to_json(art).dump(2) << '\n';
    else
        write_curve_points(art.curve, out);
}

inline void emit_simulation(const SimulationArtifact& art, ReportFormat format,
                            const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write simulation output to '" + path + "'");
    emit_simulation(art, format, out);
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace iotrisk
