#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "isd/fits.hpp"
#include "isd/gradient.hpp"
#include "isd/physics.hpp"
#include "isd/trace.hpp"

namespace isd {

inline constexpr double kPceStaticGain = 25.4;
inline constexpr double kPceDynamicGain = 15.2;

enum class CEMode { Off, PCE, RCE };

// Persistent charge-excitation pre-conditioning, applied as output gain.
struct CEState {
    CEMode mode = CEMode::Off;
    double static_gain = 1.0;
    double dynamic_gain = 1.0;

    int polarity() const { return mode == CEMode::RCE ? -1 : 1; }
    void validate() const;

    static CEState off() { return {}; }
    static CEState pce(double s = kPceStaticGain, double d = kPceDynamicGain) {
        return {CEMode::PCE, s, d};
    }
    static CEState rce(double s = kPceStaticGain, double d = kPceDynamicGain) {
        return {CEMode::RCE, s, d};
    }
};

struct ResponseDynamics {
    double tau_rise = 0.03778;   // s; 10-90 % rise = tau ln 9 = 83 ms
    double tau_fall = 0.01957;   // s; 43 ms recovery
    double noise_rms = 0.0;      // V, added to both channels
    std::uint64_t seed = 0;
    double min_pulse_width = 0.010;  // s, floor for AC pulses on abrupt edges

    void validate() const;
};

enum class DynamicSource { Empirical, ChargeDensity };

struct SensorParams {
    StaticParams static_model;
    DynamicParams dynamic_model;
    // Empirical static curve; when set it replaces the electrostatic model.
    std::optional<PiecewiseFit> static_curve;
    std::optional<GradientStack> gradient;
    DynamicSource dynamic_source = DynamicSource::Empirical;
    PermittivityMode permittivity = PermittivityMode::Corrected;

    double static_scale = 1.0;
    double dynamic_scale = 1.0;
    int ac_polarity = 1;

    void validate() const;

    // Settled DC output at a held pressure. The electrostatic models are
    // referenced to their zero-pressure value; an empirical curve is used as is.
    double static_target(double pressure) const;
    // Signed AC pulse peak for a pressure edge of the given signed amplitude.
    double dynamic_peak(double edge_amplitude) const;
};

SensorParams apply_charge_excitation(SensorParams params, const CEState& ce);

// Monotone pressure run between two flat/turning points.
struct PressureEdge {
    std::size_t start = 0;    // sample index where the run begins
    std::size_t end = 0;      // sample index where it ends
    double amplitude = 0.0;   // signed P[end] - P[start]
    double center_time = 0.0; // time of the half-amplitude crossing
};

// Edges smaller than min_fraction of the trace's peak |P| are dropped.
std::vector<PressureEdge> find_pressure_edges(const Trace& pressure,
                                              double min_fraction = 5e-3);

struct SimulationResult {
    Trace dc;
    Trace ac;
};

// DC: first-order tracking of static_target. AC: one raised-cosine pulse per
// pressure edge, positive on loading and negative on release (RCE flips),
// width 0.8 x edge duration (0.4/f for a sinusoid), floored at
// min_pulse_width and capped so neighbouring pulses never overlap.
SimulationResult simulate(const Trace& pressure, const SensorParams& params,
                          const CEState& ce, const ResponseDynamics& dyn);

}  // namespace isd
