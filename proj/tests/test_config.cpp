#include <doctest.h>

#include <set>
#include <string>

#include "isd/config.hpp"
#include "isd/errors.hpp"

using namespace isd;

TEST_SUITE("config") {

TEST_CASE("every key has a default that validates") {
    std::set<std::string> names;
    for (const auto& k : Config::schema()) {
        CHECK(names.insert(std::string(k.name)).second);
        CHECK(k.name.find('.') != std::string_view::npos);
        CHECK_FALSE(k.description.empty());
    }
    const Config cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.seed() == 42);
}

TEST_CASE("parse values, comments and blank lines") {
    const auto cfg = Config::parse(
        "# demo\n"
        "\n"
        "run.seed = 7\n"
        "excitation.kind = square   # trailing comment\n"
        "excitation.frequency_hz=3.5\n"
        "gradient.enabled = true\n"
        "fit.report_pressures_pa = 0, 100, 1e3\n");
    CHECK(cfg.seed() == 7);
    CHECK(cfg.excitation().kind == ExcitationKind::Square);
    CHECK(cfg.excitation().frequency == 3.5);
    CHECK(cfg.excitation().seed == 7);
    CHECK(cfg.dynamics().seed == 8);
    CHECK(cfg.channel().seed == 9);
    CHECK(cfg.sensor().gradient.has_value());
    CHECK(cfg.numbers("fit.report_pressures_pa") == std::vector<double>{0, 100, 1000});
}

TEST_CASE("unknown and duplicate keys are rejected with the line") {
    try {
        Config::parse("run.seed = 1\nsensor.colour = red\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("sensor.colour") != std::string::npos);
    }
    CHECK_THROWS_AS(Config::parse("run.seed = 1\nrun.seed = 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("just words\n"), ConfigError);
}

TEST_CASE("values are type checked") {
    Config cfg;
    CHECK_THROWS_AS(cfg.set("sensor.eps_r", "two"), ConfigError);
    CHECK_THROWS_AS(cfg.set("run.seed", "1.5"), ConfigError);
    CHECK_THROWS_AS(cfg.set("gradient.enabled", "yes"), ConfigError);
    CHECK_THROWS_AS(cfg.set("ce.mode", "sideways"), ConfigError);
    CHECK_THROWS_AS(cfg.set("gradient.layer_areas_m2", "1e-4, x"), ConfigError);
    CHECK_NOTHROW(cfg.set("harvest.source_peak_v", "inf"));
}

TEST_CASE("physically invalid values fail validation") {
    for (const char* bad : {"harvest.storage_c_f = -1e-6", "excitation.sample_rate_hz = 0",
                            "conditioning.sensor_c_f = 0", "sensor.thickness_m = 0",
                            "channel.drop_probability = 1", "fit.segments = 7",
                            "dynamics.tau_rise_s = 0", "ce.mode = pce\nce.static_gain = 0.5"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Config::parse(bad).validate(), ConfigError);
    }
    auto cfg = Config::parse("gradient.enabled = true\ngradient.engage_pressures_pa = 1, 2\n");
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("weight schedule") {
    auto cfg = Config::parse("excitation.kind = weight_steps\nexcitation.steps = 0.05:1, 0.1:0.5\n");
    const auto spec = cfg.excitation();
    REQUIRE(spec.steps.size() == 2);
    CHECK(spec.steps[1].mass == 0.1);
    CHECK(spec.steps[1].duration == 0.5);
    cfg.set("excitation.steps", "0.05-1");
    CHECK_THROWS_AS(cfg.excitation(), ConfigError);
}

TEST_CASE("hash identifies the effective configuration") {
    const Config a;
    const auto b = Config::parse("# only a comment\nrun.seed = 42\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 64);
    const auto c = Config::parse("run.seed = 43\n");
    CHECK(a.hash() != c.hash());
    CHECK(a.canonical().find("run.seed = 42\n") != std::string::npos);
}

TEST_CASE("sensor builder") {
    const auto cfg = Config::parse(
        "sensor.permittivity = repeated_ratio\n"
        "dynamic.source = charge_density\n"
        "ce.mode = rce\n");
    const auto s = cfg.sensor();
    CHECK(s.permittivity == PermittivityMode::RepeatedRatio);
    CHECK(s.dynamic_source == DynamicSource::ChargeDensity);
    CHECK(cfg.charge_excitation().polarity() == -1);
    CHECK(cfg.charge_excitation().static_gain == 25.4);
}

}
