// Command-line front end: scenario ingestion, pipeline orchestration and
// report emission. All numerics live in the library headers; this file only
// wires subcommands to them and maps errors onto the exit-code taxonomy
// (parse 2, validation 3, computation 4).

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iotrisk/iotrisk.hpp"

namespace {

using iotrisk::ScenarioDocument;

struct Overrides {
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> confidence;
    std::optional<int> horizon_months;
    std::optional<std::string> valuation_policy;
};

void apply_overrides(ScenarioDocument& doc, const Overrides& ov) {
    if (ov.trials) doc.sim.trials = *ov.trials;
    if (ov.seed) doc.sim.seed = *ov.seed;
    if (ov.confidence) doc.sim.confidence = *ov.confidence;
    if (ov.horizon_months) doc.sim.horizon_months = *ov.horizon_months;
    if (ov.valuation_policy)
        doc.valuation_policy = iotrisk::parse_policy(*ov.valuation_policy);
    doc.validate();
}

void warn_on_clamped_rates(const std::vector<iotrisk::Exposure>& exposures) {
    for (const auto& e : exposures)
        if (e.residual_rate.clamps())
            std::cerr << "warning: residual rate of asset '" << e.asset_id
                      << "' exceeds 1e6 micromorts; clamped to certainty\n";
}

std::string ratio_text(const std::optional<double>& r) {
    return r ? iotrisk::render_full(*r) : std::string("undefined");
}

int run_value(const ScenarioDocument& doc) {
    std::cout << "scenario: " << doc.name << '\n';
    const double total =
        iotrisk::total_value(doc.inventory, doc.valuation_policy);
    std::cout << "total value: " << iotrisk::render_money(total, doc.currency)
              << " (" << iotrisk::render_full(total) << ")\n";
    if (doc.inventory.empty()) {
        std::cout << "composition: undefined (no assets)\n";
        return 0;
    }
    const auto ca = iotrisk::composition_ratio(
        doc.inventory, iotrisk::CompositionAxis::CoreToOperational,
        doc.valuation_policy);
    std::cout << "core:operational value ratio: " << ratio_text(ca.value_ratio)
              << " (counts " << ca.numerator_count << ':'
              << ca.denominator_count << ", ratio "
              << ratio_text(ca.count_ratio) << ")\n";
    if (doc.inventory.core_count() > 0) {
        const auto da = iotrisk::composition_ratio(
            doc.inventory, iotrisk::CompositionAxis::DigitisedToBornDigital,
            doc.valuation_policy);
        std::cout << "digitised:born-digital value ratio: "
                  << ratio_text(da.value_ratio) << " (counts "
                  << da.numerator_count << ':' << da.denominator_count
                  << ", ratio " << ratio_text(da.count_ratio) << ")\n";
    } else {
        std::cout << "digitised:born-digital value ratio: undefined "
                     "(no core assets)\n";
    }
    return 0;
}

int run_micromort(const ScenarioDocument& doc,
                  std::optional<std::uint64_t> scanned,
                  std::optional<std::uint64_t> flagged,
                  std::optional<double> security_spending) {
    std::cout << "scenario: " << doc.name << '\n';
    if (doc.fleet) {
        const double f = iotrisk::fleet_iotmm(*doc.fleet);
        std::cout << "fleet IoTMM: " << iotrisk::render_fraction3(f)
                  << " (fraction " << iotrisk::render_full(f) << ", "
                  << iotrisk::render_full(
                         iotrisk::to_micromorts(f).micromorts)
                  << " micromorts)\n";
    }
    if (scanned || flagged) {
        if (!(scanned && flagged))
            throw iotrisk::ValidationError(
                "--scanned and --flagged must be given together");
        const double rate = iotrisk::scan_vulnerability_rate(*scanned, *flagged);
        std::cout << "scan vulnerability rate: "
                  << iotrisk::render_percent1(rate) << " (fraction "
                  << iotrisk::render_full(rate) << ")\n";
    }
    if (security_spending) {
        const double v = iotrisk::value_of_one_iotmm(*security_spending);
        std::cout << "value of 1 IoTMM: "
                  << iotrisk::render_money(v, doc.currency) << '\n';
    }
    if (doc.wtp) {
        const auto wtp = iotrisk::group_wtp(*doc.wtp);
        if (!wtp.reduction_consistent)
            std::cerr << "warning: per-capita reduction x population deviates "
                         "from one statistical digital death\n";
        std::cout << "group willingness-to-pay: "
                  << iotrisk::render_money(wtp.total, doc.currency) << " ("
                  << iotrisk::render_money(doc.wtp->per_unit_wtp, doc.currency)
                  << " per entity x " << doc.wtp->population << " entities)\n";
    }
    return 0;
}

int run_var(const ScenarioDocument& doc) {
    const auto exposures = iotrisk::build_exposures(doc);
    warn_on_clamped_rates(exposures);
    const double var = iotrisk::linear_var(exposures);
    std::cout << "scenario: " << doc.name << '\n';
    std::cout << "linear VaR: " << iotrisk::render_money(var, doc.currency)
              << " (" << iotrisk::render_full(var) << ")\n";
    return 0;
}

int run_simulate(const ScenarioDocument& doc,
                 const std::optional<std::string>& history_path,
                 unsigned threads, iotrisk::ReportFormat format,
                 const std::optional<std::string>& output) {
    iotrisk::SimulationArtifact art{
        history_path
            ? iotrisk::historical_distribution(
                  iotrisk::load_loss_history(*history_path))
            : [&] {
                  const auto exposures = iotrisk::build_exposures(doc);
                  warn_on_clamped_rates(exposures);
                  return iotrisk::simulate_losses(exposures, doc.sim, threads);
              }(),
        {}, doc.sim};
    art.curve = iotrisk::var_curve(
        art.distribution,
        iotrisk::default_confidence_grid(doc.sim.confidence));
    if (output)
        iotrisk::emit_simulation(art, format, *output);
    else
        iotrisk::emit_simulation(art, format, std::cout);
    return 0;
}

int run_report(const ScenarioDocument& doc, std::optional<double> declared_wtp,
               unsigned threads, iotrisk::ReportFormat format,
               const std::optional<std::string>& output) {
    warn_on_clamped_rates(iotrisk::build_exposures(doc));
    const auto report = iotrisk::build_report(doc, declared_wtp, threads);
    if (output)
        iotrisk::emit_report(report, format, *output);
    else
        iotrisk::emit_report(report, format, std::cout);
    return 0;
}

void print_error_record(const std::string& code, const std::string& message) {
    nlohmann::ordered_json record;
    record["error"] = code;
    record["message"] = message;
    std::cerr << record.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Economic model of IoT cyber risk: asset valuation, "
                 "IoT MicroMort rates and cyber Value-at-Risk"};
    app.set_version_flag("--version", iotrisk::kVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    Overrides ov;
    std::optional<std::string> output;
    std::string format_name = "structured";
    unsigned threads = 1;
    std::optional<std::uint64_t> scanned, flagged;
    std::optional<double> security_spending, declared_wtp;
    std::optional<std::string> history_path;

    auto add_common = [&](CLI::App* sub, bool sim_flags) {
        sub->add_option("--scenario", scenario_path, "Scenario file path")
            ->required();
        sub->add_option("--valuation-policy", ov.valuation_policy,
                        "Comma-separated basis order, e.g. "
                        "market,intrinsic,subjective");
        if (sim_flags) {
            sub->add_option("--trials", ov.trials, "Monte Carlo trial count");
            sub->add_option("--seed", ov.seed, "Simulation seed");
            sub->add_option("--confidence", ov.confidence,
                            "Confidence level in (0,1)");
            sub->add_option("--horizon-months", ov.horizon_months,
                            "Risk horizon in months");
            sub->add_option("--threads", threads,
                            "Worker threads (0 = hardware concurrency); "
                            "never changes results");
            sub->add_option("--output", output, "Write to file instead of stdout");
            sub->add_option("--format", format_name,
                            "Output format: structured | curve_points");
        }
    };

    auto* value_cmd = app.add_subcommand("value", "Total value and composition ratios");
    add_common(value_cmd, false);

    auto* micromort_cmd = app.add_subcommand(
        "micromort", "Fleet IoTMM, scan rate and willingness-to-pay");
    add_common(micromort_cmd, false);
    micromort_cmd->add_option("--scanned", scanned, "Devices scanned");
    micromort_cmd->add_option("--flagged", flagged, "Devices flagged vulnerable");
    micromort_cmd->add_option("--security-spending", security_spending,
                              "Total security spending backing 1 IoTMM");

    auto* var_cmd = app.add_subcommand("var", "Linear Value-at-Risk aggregate");
    add_common(var_cmd, false);

    auto* simulate_cmd = app.add_subcommand(
        "simulate", "Write the loss distribution and VaR curve");
    add_common(simulate_cmd, true);
    simulate_cmd->add_option("--history", history_path,
                             "Loss history file: historical simulation "
                             "instead of Monte Carlo");

    auto* report_cmd = app.add_subcommand("report", "Run everything and write "
                                                    "a single document");
    add_common(report_cmd, true);
    report_cmd->add_option("--declared-wtp", declared_wtp,
                           "Declared WTP for a 1% loss-limit reduction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error_record("ParseError", e.what());
        return 2;
    }

    try {
        auto doc = iotrisk::load_scenario(scenario_path);
        apply_overrides(doc, ov);
        const auto format = iotrisk::parse_format(format_name);

        if (app.got_subcommand(value_cmd)) return run_value(doc);
        if (app.got_subcommand(micromort_cmd))
            return run_micromort(doc, scanned, flagged, security_spending);
        if (app.got_subcommand(var_cmd)) return run_var(doc);
        if (app.got_subcommand(simulate_cmd))
            return run_simulate(doc, history_path, threads, format, output);
        if (app.got_subcommand(report_cmd))
            return run_report(doc, declared_wtp, threads, format, output);
        return 1;
    } catch (const iotrisk::Error& e) {
        print_error_record(e.code(), e.what());
        return e.exit_class();
    } catch (const std::exception& e) {
        print_error_record("Error", e.what());
        return 1;
    }
}
