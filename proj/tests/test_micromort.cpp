#include <catch2/catch_amalgamated.hpp>

#include <iotrisk/micromort.hpp>
#include <iotrisk/render.hpp>
#include <iotrisk/risk_model.hpp>

#include <cmath>
#include <random>

using namespace iotrisk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("fleet IoTMM is the vulnerable fraction of the fleet",
          "[micromort]") {
    // 378 million vulnerable of 8.4 billion deployed
    const double f2017 = fleet_iotmm({8'400'000'000ull, 378'000'000ull});
    CHECK(f2017 == 0.045);
    CHECK(render_fraction3(f2017) == "0.045");

    // 900 million vulnerable of 20.4 billion forecast
    const double f2020 = fleet_iotmm({20'400'000'000ull, 900'000'000ull});
    CHECK_THAT(f2020, WithinRel(0.044117647058823529, 1e-15));
    CHECK(render_fraction3(f2020) == "0.044");
    CHECK(f2020 != 0.044);  // rendering rounds, the value itself never does

    CHECK(fleet_iotmm({1000, 0}) == 0.0);
    CHECK(fleet_iotmm({1000, 1000}) == 1.0);
}

TEST_CASE("fleet stats validate", "[micromort]") {
    CHECK_THROWS_AS(fleet_iotmm({0, 0}), ValidationError);
    CHECK_THROWS_AS(fleet_iotmm({10, 11}), ValidationError);
}

TEST_CASE("fleet IoTMM is scale invariant and monotone", "[micromort]") {
    // the fraction depends only on the ratio of the counts
    CHECK(fleet_iotmm({8'400, 378}) == fleet_iotmm({8'400'000'000ull, 378'000'000ull}));
    CHECK(fleet_iotmm({84, 27}) == fleet_iotmm({8400, 2700}));

    std::mt19937_64 rng(9001);
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t total = 1 + rng() % 1'000'000;
        const std::uint64_t vuln = rng() % (total + 1);
        const double f = fleet_iotmm({total, vuln});
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        if (vuln < total)
            CHECK(fleet_iotmm({total, vuln + 1}) > f);
    }
}

TEST_CASE("fleet fraction converts to micromorts and back", "[micromort]") {
    const double f = fleet_iotmm({8'400'000'000ull, 378'000'000ull});
    CHECK(to_micromorts(f).micromorts == 45000.0);
    CHECK_THAT(from_micromorts(to_micromorts(f)), WithinAbs(f, 1e-12));
}

TEST_CASE("scan vulnerability rate", "[micromort]") {
    // 14,000 flagged among 310,000 scanned
    const double rate = scan_vulnerability_rate(310'000, 14'000);
    CHECK_THAT(rate, WithinRel(0.045161290322580645, 1e-15));
    CHECK(render_percent1(rate) == "4.5%");

    CHECK(scan_vulnerability_rate(1000, 45) == 0.045);
    CHECK(scan_vulnerability_rate(10, 10) == 1.0);
    CHECK(scan_vulnerability_rate(10, 0) == 0.0);

    CHECK_THROWS_AS(scan_vulnerability_rate(0, 0), ValidationError);
    CHECK_THROWS_AS(scan_vulnerability_rate(10, 11), ValidationError);
}

TEST_CASE("value of one IoTMM divides spending by one million",
          "[micromort]") {
    CHECK(value_of_one_iotmm(840.5e6) == 840.5);
    CHECK(value_of_one_iotmm(0.0) == 0.0);
    CHECK(value_of_one_iotmm(2e6) == 2.0);
    // linear in spending (power-of-two factors are exact)
    CHECK(value_of_one_iotmm(4.0 * 123456.0) == 4.0 * value_of_one_iotmm(123456.0));

    CHECK_THROWS_AS(value_of_one_iotmm(-1.0), ValidationError);
    CHECK_THROWS_AS(value_of_one_iotmm(std::nan("")), ValidationError);
    CHECK_THROWS_AS(value_of_one_iotmm(INFINITY), ValidationError);
}

TEST_CASE("group willingness-to-pay aggregates per-entity WTP",
          "[micromort]") {
    // $840.5 per entity, 100,000 entities, 1e-5 per-capita reduction
    const auto r = group_wtp({840.5, 100'000, 1e-5});
    CHECK(r.total == 84'050'000.0);
    CHECK(r.reduction_consistent);

    const auto single = group_wtp({123.25, 1, 1.0});
    CHECK(single.total == 123.25);
    CHECK(single.reduction_consistent);

    const auto third = group_wtp({10.0, 500, 0.002});
    CHECK(third.total == 5000.0);
    CHECK(third.reduction_consistent);
}

TEST_CASE("group WTP flags an inconsistent reduction", "[micromort]") {
    // 500 entities x 0.003 removes 1.5 statistical deaths, not 1
    CHECK_FALSE(group_wtp({10.0, 500, 0.003}).reduction_consistent);
    // 10 entities x 1e-5 removes only 1e-4 of a death
    CHECK_FALSE(group_wtp({10.0, 10, 1e-5}).reduction_consistent);
}

TEST_CASE("WTP parameters validate", "[micromort]") {
    CHECK_THROWS_AS(group_wtp({-1.0, 10, 0.1}), ValidationError);
    CHECK_THROWS_AS(group_wtp({1.0, 0, 0.1}), ValidationError);
    CHECK_THROWS_AS(group_wtp({1.0, 10, 0.0}), ValidationError);
    CHECK_THROWS_AS(group_wtp({1.0, 10, 1.5}), ValidationError);
    CHECK_THROWS_AS(group_wtp({std::nan(""), 10, 0.1}), ValidationError);
}

TEST_CASE("group WTP is linear in per-unit WTP and population",
          "[micromort]") {
    std::mt19937_64 rng(9002);
    std::uniform_real_distribution<double> wtp(0.0, 1e4);
    for (int i = 0; i < 200; ++i) {
        const double per_unit = wtp(rng);
        const std::uint64_t population = 1 + rng() % 1'000'000;
        const auto base = group_wtp({per_unit, population, 0.5});
        CHECK(group_wtp({2.0 * per_unit, population, 0.5}).total ==
              2.0 * base.total);
        CHECK_THAT(group_wtp({per_unit, 3 * population, 0.5}).total,
                   WithinRel(3.0 * base.total, 1e-15));
    }
}
