#include "doctest.h"

#include <cmath>

#include "spinline/config.hpp"

using namespace spinline;

TEST_CASE("figure presets resolve the tied parameters") {
    const RunConfig fig1 = preset_config("fig1");
    CHECK(fig1.protocol == Protocol::Single);
    CHECK(fig1.spin == 10.0);
    CHECK(fig1.anisotropy == 0.5);
    CHECK(fig1.sigma == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(fig1.temperature == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(fig1.coupling == "phonon");
    CHECK(fig1.bath_exponent == 3);
    CHECK(fig1.lambda == doctest::Approx(3e-8).epsilon(1e-14));
    CHECK(fig1.refine);
    CHECK(fig1.output == "fig1.csv");

    const RunConfig top = preset_config("fig2-top");
    CHECK(top.protocol == Protocol::CrossoverSequence);
    CHECK(top.sequence_spins == std::vector<double>{5.0, 25.0, 50.0, 100.0});
    CHECK(top.temperature == 1.0);
    CHECK(top.sigma == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(top.lambda_over_s == doctest::Approx(1e-2).epsilon(1e-14));
    REQUIRE(top.distance_window.has_value());
    CHECK((*top.distance_window)[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK((*top.distance_window)[1] == doctest::Approx(1.1).epsilon(1e-14));

    const RunConfig bottom = preset_config("fig2-bottom");
    CHECK(bottom.protocol == Protocol::DampingLadder);
    CHECK(bottom.spin == 50.0);
    CHECK(bottom.sequence_lambda_over_s == std::vector<double>{1e-2, 3e-2, 1e-1});

    const RunConfig fig3 = preset_config("fig3");
    CHECK(fig3.protocol == Protocol::MatchedCouplings);
    CHECK(fig3.spin == 10.0);
    CHECK(fig3.anisotropy == doctest::Approx(0.01).epsilon(1e-14));
    REQUIRE(fig3.distance_window.has_value());
    CHECK((*fig3.distance_window)[0] == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("the sequence modifier selects one member as a single run") {
    const RunConfig member = preset_config("fig2-top:S=50");
    CHECK(member.protocol == Protocol::Single);
    CHECK(member.spin == 50.0);
    CHECK(member.sequence_spins.empty());
    CHECK(member.anisotropy == doctest::Approx(1.0 / 2500.0).epsilon(1e-13));
    CHECK(member.lambda == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(member.output == "fig2-top-S50.csv");

    CHECK_THROWS_AS(preset_config("fig2-top:S=abc"), ConfigError);
    CHECK_THROWS_AS(preset_config("fig1:S=10"), ConfigError);
    try {
        preset_config("no-such-preset");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key == "no-such-preset");
        CHECK(std::string(e.what()).find("fig1") != std::string::npos);
    }
}

TEST_CASE("echoed configurations parse back to the identical value") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        const RunConfig cfg = preset_config(name);
        CHECK(parse_config(echo_config(cfg)) == cfg);
    }
    const RunConfig custom = parse_config(R"({
        "spin": 2.5, "anisotropy": 0.3, "temperature": 0.8,
        "field": [0.0, 0.0, 0.05], "coupling": "electron-hole",
        "bath_exponent": 1, "lambda": 0.004,
        "grid": {"min": 0.1, "max": 2.0, "count": 41, "scaled": false},
        "threads": 2, "verify": true, "output": "x.csv",
        "distance_window": [0.3, 0.9]
    })");
    CHECK(parse_config(echo_config(custom)) == custom);
    CHECK(custom.sigma == doctest::Approx(0.3 * 6.25 / 0.8).epsilon(1e-13));
    CHECK(custom.xi == doctest::Approx(2.5 * 0.05 / 0.8).epsilon(1e-13));
}

TEST_CASE("defaults fill a minimal document") {
    const RunConfig cfg = parse_config(R"({"spin": 2.0, "anisotropy": 0.3})");
    CHECK(cfg.temperature == 1.0);
    CHECK(cfg.sigma == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(cfg.coupling == "phonon");
    CHECK(cfg.bath_exponent == 3);
    // lambda from the default lambda/S = 1e-2
    CHECK(cfg.lambda == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(cfg.grid == GridSpec{});
    CHECK(cfg.protocol == Protocol::Single);
    CHECK_FALSE(cfg.distance_window.has_value());
}

TEST_CASE("any two of the tied triple determine the third") {
    const RunConfig from_sigma = parse_config(R"({"spin": 4.0, "sigma": 2.0, "temperature": 0.5})");
    CHECK(from_sigma.anisotropy == doctest::Approx(2.0 * 0.5 / 16.0).epsilon(1e-13));

    const RunConfig from_d = parse_config(R"({"spin": 4.0, "anisotropy": 0.1, "sigma": 2.0})");
    CHECK(from_d.temperature == doctest::Approx(0.1 * 16.0 / 2.0).epsilon(1e-13));

    const RunConfig consistent = parse_config(
        R"({"spin": 4.0, "anisotropy": 0.1, "temperature": 0.8, "sigma": 2.0})");
    CHECK(consistent.sigma == 2.0);

    CHECK_THROWS_AS(
        parse_config(R"({"spin": 4.0, "anisotropy": 0.1, "temperature": 0.8, "sigma": 3.0})"),
        ConfigError);
}

TEST_CASE("field strength and reduced field must agree when both are given") {
    const RunConfig from_xi = parse_config(
        R"({"spin": 5.0, "anisotropy": 0.1, "temperature": 2.0, "xi": 1.5})");
    CHECK(from_xi.field[2] == doctest::Approx(1.5 * 2.0 / 5.0).epsilon(1e-13));

    CHECK_NOTHROW(parse_config(
        R"({"spin": 5.0, "anisotropy": 0.1, "temperature": 2.0,
            "field": [0.0, 0.0, 0.6], "xi": 1.5})"));
    CHECK_THROWS_AS(parse_config(
        R"({"spin": 5.0, "anisotropy": 0.1, "temperature": 2.0,
            "field": [0.0, 0.0, 0.6], "xi": 2.0})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"spin": 5.0, "anisotropy": 0.1, "xi": -1.0})"),
                    ConfigError);
}

TEST_CASE("absolute and per-spin coupling strengths must agree when both are given") {
    const RunConfig both = parse_config(
        R"({"spin": 4.0, "anisotropy": 0.1, "lambda": 0.2, "lambda_over_s": 0.05})");
    CHECK(both.lambda == 0.2);
    CHECK_THROWS_AS(parse_config(
        R"({"spin": 4.0, "anisotropy": 0.1, "lambda": 0.2, "lambda_over_s": 0.06})"),
                    ConfigError);
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        parse_config(R"({"spin": 2.0, "anisotropy": 0.1, "lambda_overs": 1e-2})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key == "lambda_overs");
    }
    CHECK_THROWS_AS(parse_config(R"({"grid": {"min": 0.0, "maxx": 1.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"spin": "two"})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"(["list"])"), ConfigError);
}

TEST_CASE("protocol requirements are validated") {
    CHECK_THROWS_AS(parse_config(
        R"({"protocol": "crossover-sequence", "sigma": 1.0, "temperature": 1.0, "spin": 5.0})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(
        R"({"protocol": "damping-ladder", "spin": 5.0, "anisotropy": 0.1})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"protocol": "no-such"})"), ConfigError);
    CHECK(protocol_from_name("matched-couplings") == Protocol::MatchedCouplings);
    CHECK(std::string(protocol_name(Protocol::DampingLadder)) == "damping-ladder");
}

TEST_CASE("grid and window validation") {
    CHECK_THROWS_AS(parse_config(
        R"({"spin": 2.0, "anisotropy": 0.1, "grid": {"count": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(
        R"({"spin": 2.0, "anisotropy": 0.1, "grid": {"min": 1.0, "max": 0.5}})"), ConfigError);
    // scaled grid needs a frequency unit, so D = 0 is rejected
    CHECK_THROWS_AS(parse_config(R"({"spin": 2.0, "field": [0.0, 0.0, 1.0]})"), ConfigError);
    CHECK_NOTHROW(parse_config(
        R"({"spin": 2.0, "field": [0.0, 0.0, 1.0], "grid": {"scaled": false, "max": 3.0}})"));
    CHECK_THROWS_AS(parse_config(
        R"({"spin": 2.0, "anisotropy": 0.1, "distance_window": [0.9, 0.5]})"), ConfigError);
    const RunConfig cleared = parse_config(
        R"({"preset": "fig3", "distance_window": null})");
    CHECK_FALSE(cleared.distance_window.has_value());
}

TEST_CASE("preset values yield to explicit keys") {
    const RunConfig cfg = parse_config(R"({"preset": "fig1", "lambda": 6e-8, "refine": false})");
    CHECK(cfg.lambda == doctest::Approx(6e-8).epsilon(1e-14));
    CHECK_FALSE(cfg.refine);
    CHECK(cfg.spin == 10.0);
    CHECK(cfg.output == "fig1.csv");
}

TEST_CASE("sequence members inherit sigma and per-spin coupling") {
    const RunConfig base = preset_config("fig2-top");
    const RunConfig member = sequence_member(base, 5.0);
    CHECK(member.protocol == Protocol::Single);
    CHECK(member.spin == 5.0);
    CHECK(member.anisotropy == doctest::Approx(1.0 / 25.0).epsilon(1e-13));
    CHECK(member.lambda == doctest::Approx(0.05).epsilon(1e-13));
    CHECK(member.temperature == base.temperature);
    CHECK(member.sequence_spins.empty());
    CHECK(member.sequence_lambda_over_s.empty());
}
