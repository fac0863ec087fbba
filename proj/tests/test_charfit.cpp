#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "isd/charfit.hpp"
#include "isd/errors.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace isd;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

PVSamples three_region_data(double noise = 0.0, std::uint64_t seed = 0) {
    PVSamples d;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 1; i <= 80; ++i) {
        const double p = 500.0 * i;
        d.points.push_back({p, oracle::three_region(p, 2.6, 0.7, 0.2, 11e3, 26e3) + noise * n(rng)});
    }
    return d;
}

PVSamples saturating_data(double v_max, double k_per_pa, double noise = 0.0, std::uint64_t seed = 0) {
    PVSamples d;
    d.mode = ResponseMode::Dynamic;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double p : oracle::log_grid(100.0, 2e4, 50)) {
        d.points.push_back({p, static_cast<double>(oracle::saturating(v_max, k_per_pa, p)) + noise * n(rng)});
    }
    return d;
}

double percentile95(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[static_cast<std::size_t>(std::ceil(0.95 * v.size())) - 1];
}

Trace first_order_pulse(double tau_rise, double tau_fall, double t_on, double t_off, double duration) {
    Trace tr;
    tr.channel = Channel::VoltageDC;
    const auto n = static_cast<std::size_t>(std::llround(duration / tr.dt));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = tr.time(i);
        double v = 0.0;
        if (t >= t_on) v = 1.0 - std::exp(-(std::min(t, t_off) - t_on) / tau_rise);
        if (t > t_off) v *= std::exp(-(t - t_off) / tau_fall);
        tr.samples.push_back(2.5 * v);
    }
    return tr;
}

}  // namespace

TEST_SUITE("charfit") {

TEST_CASE("noiseless three-region data is recovered") {
    const auto fit = fit_piecewise(three_region_data(), 3);
    REQUIRE(fit.segments() == 3);
    CHECK(rel(fit.slopes[0] * 1000, 2.6) < 1e-6);
    CHECK(rel(fit.slopes[1] * 1000, 0.7) < 1e-6);
    CHECK(rel(fit.slopes[2] * 1000, 0.2) < 1e-6);
    CHECK(std::abs(fit.breakpoints[0] - 11e3) <= 500.0);
    CHECK(std::abs(fit.breakpoints[1] - 26e3) <= 500.0);
    CHECK(fit.rmse < 1e-9);
    CHECK_NOTHROW(fit.validate());
    const auto rows = sensitivity_report(fit);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].sensitivity * 1000 == doctest::Approx(2.6));
    CHECK(rows[2].p_hi == fit.p_max);
}

TEST_CASE("single segment is a plain line") {
    PVSamples d;
    for (int i = 0; i < 10; ++i) d.points.push_back({1000.0 * i, 3e-3 * 1000.0 * i + 0.4});
    const auto fit = fit_piecewise(d, 1);
    CHECK(fit.slopes[0] == doctest::Approx(3e-3).epsilon(1e-12));
    CHECK(fit.intercepts[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(fit.rmse < 1e-12);
}

TEST_CASE("noisy slopes stay within five percent") {
    std::vector<double> err[3];
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto fit = fit_piecewise(three_region_data(0.05, seed), 3);
        const double truth[3] = {2.6, 0.7, 0.2};
        for (int j = 0; j < 3; ++j) err[j].push_back(rel(fit.slopes[j] * 1000, truth[j]));
    }
    for (auto& e : err) CHECK(percentile95(e) < 0.05);
}

TEST_CASE("two-region gradient curve") {
    PVSamples d;
    for (int i = 1; i <= 60; ++i) {
        const double p = 60.0 * i;
        const double v = p <= 1950.0 ? 34.7e-3 * p : 34.7e-3 * 1950.0 + 15.8e-3 * (p - 1950.0);
        d.points.push_back({p, v});
    }
    const auto rows = sensitivity_report(fit_piecewise(d, 2));
    REQUIRE(rows.size() == 2);
    CHECK(rel(rows[0].sensitivity * 1000, 34.7) < 1e-6);
    CHECK(rel(rows[1].sensitivity * 1000, 15.8) < 1e-6);
}

TEST_CASE("SSE does not grow with more segments") {
    const auto d = three_region_data(0.05, 3);
    double prev = INFINITY;
    for (int n = 1; n <= 4; ++n) {
        const double sse = fit_piecewise(d, n).sse;
        CHECK(sse <= prev * (1 + 1e-12));
        prev = sse;
    }
}

TEST_CASE("piecewise fits are bit-reproducible") {
    const auto d = three_region_data(0.05, 9);
    const auto a = fit_piecewise(d, 3), b = fit_piecewise(d, 3);
    CHECK(a.slopes == b.slopes);
    CHECK(a.breakpoints == b.breakpoints);
    CHECK(a.intercepts == b.intercepts);
}

TEST_CASE("piecewise preconditions") {
    PVSamples few;
    few.points = {{1, 1}, {2, 2}, {3, 3}};
    CHECK_THROWS_AS(fit_piecewise(few, 1), FitError);
    few.points.push_back({4, 4});
    few.points.push_back({5, 5});
    CHECK_THROWS_AS(fit_piecewise(few, 3), FitError);
    CHECK_THROWS_AS(fit_piecewise(few, 5), FitError);
    PVSamples unordered;
    unordered.points = {{1, 1}, {3, 2}, {2, 3}, {4, 4}};
    CHECK_THROWS_AS(fit_piecewise(unordered, 1), FitError);
}

TEST_CASE("noiseless saturating data is recovered") {
    for (double k_kpa : {0.42, 0.05, 2.0}) {
        const auto fit = fit_exponential(saturating_data(163.6, k_kpa / 1000.0));
        CHECK(rel(fit.v_max, 163.6) < 1e-6);
        CHECK(rel(fit.k, k_kpa / 1000.0) < 1e-6);
        CHECK_FALSE(fit.at_bound);
        const double zero = 0.0;
        const auto rows = sensitivity_report(fit, std::span<const double>(&zero, 1));
        CHECK(rel(rows[0].sensitivity, fit.v_max * fit.k) < 1e-15);
    }
}

TEST_CASE("noisy saturating fits") {
    std::vector<double> ev, ek;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto fit = fit_exponential(saturating_data(163.6, 0.42e-3, 1.0, seed));
        ev.push_back(rel(fit.v_max, 163.6));
        ek.push_back(rel(fit.k, 0.42e-3));
    }
    CHECK(percentile95(ev) < 0.02);
    CHECK(percentile95(ek) < 0.05);
}

TEST_CASE("degenerate saturating data") {
    PVSamples flat;
    for (double p : oracle::log_grid(100.0, 2e4, 20)) flat.points.push_back({p, 163.6});
    bool flagged = false;
    try {
        flagged = fit_exponential(flat).at_bound;
    } catch (const FitError&) {
        flagged = true;
    }
    CHECK(flagged);

    PVSamples falling;
    for (double p : oracle::log_grid(100.0, 2e4, 20)) falling.points.push_back({p, -p});
    CHECK_THROWS_AS(fit_exponential(falling), FitError);

    PVSamples narrow;
    for (int i = 0; i < 10; ++i) narrow.points.push_back({1000.0 + 100.0 * i, 1.0 * i});
    CHECK_THROWS_AS(fit_exponential(narrow), FitError);
}

TEST_CASE("response times of first-order transitions") {
    const auto tr = first_order_pulse(0.03778, 0.01957, 0.2, 1.2, 2.0);
    const auto rt = extract_response_times(tr);
    CHECK(std::abs(rt.rise - static_cast<double>(oracle::ten_ninety(0.03778L))) <= 1e-3);
    CHECK(std::abs(rt.fall - static_cast<double>(oracle::ten_ninety(0.01957L))) <= 1e-3);
    CHECK(std::abs(rt.rise - 0.083) <= 1e-3);
    CHECK(std::abs(rt.fall - 0.043) <= 1e-3);
}

TEST_CASE("instantaneous step is resolution bound") {
    auto tr = support::step_trace(3.0, 0.3, 0.8, 1.0);
    tr.channel = Channel::VoltageDC;
    const auto rt = extract_response_times(tr);
    CHECK(rt.rise <= 2e-3);
    CHECK(rt.fall <= 2e-3);
}

TEST_CASE("flat trace has no transition") {
    Trace flat;
    flat.samples.assign(500, 1.0);
    CHECK_THROWS_AS(extract_response_times(flat), DetectionError);
}

TEST_CASE("detection limit in the linear regime") {
    SensorParams p;
    p.dynamic_model.v_max = 163.6;
    p.dynamic_model.k = 48.4 / 163.6 / 1000.0;
    ResponseDynamics dyn;
    dyn.noise_rms = 0.1;
    const double oracle_limit = 3 * 0.1 / (48.4 / 1000.0);
    const double limit = detection_limit(p, dyn, 3.0);
    CHECK(std::abs(oracle_limit - 6.198) < 1e-3);
    CHECK(limit >= oracle_limit);
    CHECK(limit <= oracle_limit * 1.02);
    const double doubled = detection_limit(p, dyn, 6.0);
    CHECK(doubled / limit == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("noise-free detection reaches the grid minimum") {
    SensorParams p;
    ResponseDynamics dyn;
    DetectionGrid grid;
    CHECK(detection_limit(p, dyn, 3.0, grid) == grid.min_pa);
    dyn.noise_rms = 1e6;
    CHECK(std::isinf(detection_limit(p, dyn, 3.0, grid)));
}

TEST_CASE("tap peak follows the dynamic law") {
    SensorParams p;
    CHECK(tap_peak_response(p, ResponseDynamics{}, 800.0) == doctest::Approx(dynamic_voltage(p.dynamic_model, 800.0)).epsilon(1e-12));
}

}
