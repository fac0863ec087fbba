#include "isd/transducer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "isd/errors.hpp"

namespace isd {

void CEState::validate() const {
    if (mode == CEMode::Off) {
        if (static_gain != 1.0 || dynamic_gain != 1.0) {
            throw ConfigError("charge excitation: gains must be 1 when off");
        }
        return;
    }
    if (!(static_gain >= 1.0) || !(dynamic_gain >= 1.0)) {
        throw ConfigError("charge excitation: gains must be >= 1");
    }
}

void ResponseDynamics::validate() const {
    if (!(tau_rise > 0.0)) throw ConfigError("dynamics: tau_rise must be > 0");
    if (!(tau_fall > 0.0)) throw ConfigError("dynamics: tau_fall must be > 0");
    if (!(noise_rms >= 0.0)) throw ConfigError("dynamics: noise_rms must be >= 0");
    if (!(min_pulse_width > 0.0)) throw ConfigError("dynamics: min pulse width must be > 0");
}

void SensorParams::validate() const {
    static_model.validate();
    dynamic_model.validate();
    if (static_curve) static_curve->validate();
    if (gradient) gradient->validate();
    if (ac_polarity != 1 && ac_polarity != -1) throw ConfigError("sensor: polarity must be +-1");
}

double SensorParams::static_target(double pressure) const {
    double v = 0.0;
    if (static_curve) {
        v = static_curve->evaluate(pressure);
    } else if (gradient) {
        v = gradient_static_response(*gradient, static_model, pressure) -
            gradient_static_response(*gradient, static_model, 0.0);
    } else {
        v = static_voltage(static_model, pressure) - static_voltage(static_model, 0.0);
    }
    return static_scale * v;
}

double SensorParams::dynamic_peak(double edge_amplitude) const {
    const double dp = std::abs(edge_amplitude);
    double v = 0.0;
    if (gradient) {
        v = gradient_dynamic_response(*gradient, dynamic_model, dp, permittivity);
    } else if (dynamic_source == DynamicSource::ChargeDensity) {
        v = dynamic_peak_voltage(dynamic_model, dp, permittivity);
    } else {
        v = dynamic_voltage(dynamic_model, dp);
    }
    const double sign = edge_amplitude < 0.0 ? -1.0 : 1.0;
    return sign * ac_polarity * dynamic_scale * v;
}

SensorParams apply_charge_excitation(SensorParams params, const CEState& ce) {
    ce.validate();
    if (ce.mode == CEMode::Off) return params;
    params.static_scale *= ce.static_gain;
    params.dynamic_scale *= ce.dynamic_gain;
    params.ac_polarity = ce.polarity();
    return params;
}

std::vector<PressureEdge> find_pressure_edges(const Trace& pressure, double min_fraction) {
    std::vector<PressureEdge> edges;
    const auto& p = pressure.samples;
    if (p.size() < 2) return edges;
    double peak = 0.0;
    for (double v : p) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return edges;
    const double flat_tol = 1e-12 * peak;

    auto close_run = [&](std::size_t start, std::size_t end) {
        const double amp = p[end] - p[start];
        if (std::abs(amp) < min_fraction * peak) return;
        const double half = p[start] + 0.5 * amp;
        std::size_t j = start + 1;
        while (j < end && (amp > 0 ? p[j] < half : p[j] > half)) ++j;
        const double frac = (half - p[j - 1]) / (p[j] - p[j - 1]);
        edges.push_back({start, end, amp, pressure.time(j - 1) + frac * pressure.dt});
    };

    int dir = 0;
    std::size_t start = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        const double d = p[i] - p[i - 1];
        const int step = d > flat_tol ? 1 : (d < -flat_tol ? -1 : 0);
        if (step != dir) {
            if (dir != 0) close_run(start, i - 1);
            dir = step;
            start = i - 1;
        }
    }
    if (dir != 0) close_run(start, p.size() - 1);
    return edges;
}

namespace {

void add_pulse(std::vector<double>& out, const Trace& grid, double peak, double center,
               double width) {
    const double dt = grid.dt;
    const auto c = std::llround((center - grid.t0) / dt);
    const auto half = static_cast<long long>(std::ceil(0.5 * width / dt));
    const auto n = static_cast<long long>(out.size());
    for (long long m = std::max(0LL, c - half); m <= std::min(n - 1, c + half); ++m) {
        const double u = static_cast<double>(m - c) * dt;
        if (std::abs(u) >= 0.5 * width) continue;
        out[static_cast<std::size_t>(m)] +=
            peak * 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * u / width));
    }
}

}  // namespace

SimulationResult simulate(const Trace& pressure, const SensorParams& params,
                          const CEState& ce, const ResponseDynamics& dyn) {
    pressure.validate();
    if (pressure.channel != Channel::PressurePa) {
        throw ConfigError("simulate: input trace must be a pressure channel");
    }
    dyn.validate();
    const SensorParams sensor = apply_charge_excitation(params, ce);
    sensor.validate();

    SimulationResult res;
    res.dc = Trace{pressure.t0, pressure.dt, {}, Channel::VoltageDC};
    res.ac = Trace{pressure.t0, pressure.dt, {}, Channel::VoltageAC};
    const std::size_t n = pressure.size();
    res.dc.samples.resize(n);
    res.ac.samples.assign(n, 0.0);

    const double rise_gain = -std::expm1(-pressure.dt / dyn.tau_rise);
    const double fall_gain = -std::expm1(-pressure.dt / dyn.tau_fall);
    double y = sensor.static_target(pressure.samples[0]);
    res.dc.samples[0] = y;
    for (std::size_t i = 1; i < n; ++i) {
        const double target = sensor.static_target(pressure.samples[i]);
        y += (target - y) * (target > y ? rise_gain : fall_gain);
        res.dc.samples[i] = y;
    }

    const auto edges = find_pressure_edges(pressure);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& edge = edges[e];
        double width = std::max(0.8 * (pressure.time(edge.end) - pressure.time(edge.start)),
                                dyn.min_pulse_width);
        if (e > 0) width = std::min(width, 0.8 * (edge.center_time - edges[e - 1].center_time));
        if (e + 1 < edges.size()) {
            width = std::min(width, 0.8 * (edges[e + 1].center_time - edge.center_time));
        }
        add_pulse(res.ac.samples, pressure, sensor.dynamic_peak(edge.amplitude),
                  edge.center_time, width);
    }

    if (dyn.noise_rms > 0.0) {
        std::mt19937_64 rng(dyn.seed);
        std::normal_distribution<double> noise(0.0, dyn.noise_rms);
        for (double& v : res.dc.samples) v += noise(rng);
        for (double& v : res.ac.samples) v += noise(rng);
    }
    return res;
}

}  // namespace isd
