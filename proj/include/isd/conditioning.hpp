#pragma once

#include <limits>
#include <vector>

#include "isd/trace.hpp"

namespace isd {

// Sensor (charge source with internal capacitance) loaded by a parallel
// capacitor and drained through a series resistor.
struct ConditioningNetwork {
    double series_r = 50e6;           // ohm
    double parallel_c = 0.0;          // F
    double sensor_c_internal = 100e-12;  // F
    // AC excursions below this fraction of the trace's peak |V| are ignored.
    double pulse_threshold_fraction = 0.05;

    double total_capacitance() const { return sensor_c_internal + parallel_c; }
    double time_constant() const { return series_r * total_capacitance(); }
    void validate() const;
};

struct ChargePulse {
    double time;    // s
    double charge;  // C, signed
};

// Charge pulses in an open-circuit AC trace: one per same-sign excursion,
// located at its peak, carrying sensor_c_internal * peak voltage.
std::vector<ChargePulse> extract_charge_pulses(const Trace& ac, const ConditioningNetwork& net);

// Each pulse of charge Q0 steps the output by Q0 / (C_s + C_p) and decays
// with tau = R (C_s + C_p).
Trace shape_pulse(const Trace& ac, const ConditioningNetwork& net);

// Single-pulse closed forms.
double shaped_amplitude(double charge, const ConditioningNetwork& net);
double shaped_half_width(const ConditioningNetwork& net);

struct HarvestConfig {
    double storage_c = 2.2e-6;            // F
    int pulses_per_cycle = 2;
    double charge_per_pulse = 43.1e-9;    // C
    double frequency = 6.0;               // Hz
    double duration = 60.0;               // s
    double diode_drop = 0.0;              // V per diode
    double source_peak = std::numeric_limits<double>::infinity();  // V
    double sample_rate = 10.0;            // Hz, output trace

    double pulse_rate() const { return pulses_per_cycle * frequency; }
    void validate() const;
};

// Storage-capacitor voltage through an ideal bridge rectifier. A pulse
// delivers its charge only while source_peak > V_store + 2 * diode_drop.
// The trace includes both endpoints t = 0 and t = duration.
Trace harvest(const HarvestConfig& cfg);

}  // namespace isd
