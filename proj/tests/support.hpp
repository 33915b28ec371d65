#pragma once

// Shared helpers for the unit tests: deterministic case generators (stdlib
// mt19937_64, independent of the library's counter-based generator), a
// brute-force subset-enumeration oracle for the exact loss distribution, and
// a tiny process-spawn wrapper for CLI round trips.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <iotrisk/iotrisk.hpp>

namespace testsupport {

inline std::vector<iotrisk::Exposure> random_exposures(std::mt19937_64& rng,
                                                       std::size_t n,
                                                       double p_lo = 0.0,
                                                       double p_hi = 1.0) {
    std::uniform_real_distribution<double> value(0.0, 1e6);
    std::uniform_real_distribution<double> prob(p_lo, p_hi);
    std::vector<iotrisk::Exposure> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({"asset-" + std::to_string(i), value(rng),
                       iotrisk::MicromortRate{prob(rng) * 1e6}});
    return out;
}

struct OracleAtom {
    double loss = 0.0;
    double probability = 0.0;
};

// Independent oracle: enumerate all 2^n death subsets directly, summing
// losses in ascending asset order and multiplying survival/death factors in
// ascending asset order, then merge equal losses. Practical for n <= ~16.
inline std::vector<OracleAtom> brute_force_distribution(
    const std::vector<iotrisk::Exposure>& exposures) {
    const std::size_t n = exposures.size();
    std::vector<double> p(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = exposures[i].residual_rate.as_probability();
        v[i] = exposures[i].value;
    }
    std::vector<OracleAtom> outcomes;
    outcomes.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double loss = 0.0;
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                loss += v[i];
                prob *= p[i];
            } else {
                prob *= 1.0 - p[i];
            }
        }
        outcomes.push_back({loss, prob});
    }
    std::sort(outcomes.begin(), outcomes.end(),
              [](const OracleAtom& a, const OracleAtom& b) {
                  return a.loss < b.loss;
              });
    std::vector<OracleAtom> merged;
    for (const auto& o : outcomes) {
        if (!merged.empty() && merged.back().loss == o.loss)
            merged.back().probability += o.probability;
        else
            merged.push_back(o);
    }
    std::erase_if(merged,
                  [](const OracleAtom& a) { return a.probability <= 0.0; });
    return merged;
}

// Independent empirical-quantile oracle: linear scan for the smallest sorted
// sample whose empirical CDF (computed in double, as count/n) reaches alpha.
inline double scan_quantile(std::vector<double> samples, double alpha) {
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    for (std::size_t count = 1; count <= samples.size(); ++count) {
        if (static_cast<double>(count) / n >= alpha) return samples[count - 1];
    }
    return samples.back();
}

// Scratch directory for files the tests write; removed on process exit.
inline const std::filesystem::path& scratch_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("iotrisk-tests-" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

inline std::filesystem::path scratch_file(const std::string& name) {
    return scratch_dir() / name;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI with `args` appended, capturing exit code, stdout and stderr.
inline CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto out_path = scratch_file("cli-out-" + std::to_string(counter));
    const auto err_path = scratch_file("cli-err-" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(IOTRISK_CLI_PATH) + " " + args + " >" +
                            out_path.string() + " 2>" + err_path.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

inline std::string scenario_path(const std::string& name) {
    return std::string(IOTRISK_SCENARIO_DIR) + "/" + name;
}

}  // namespace testsupport
