#include "isd/conditioning.hpp"

#include <cmath>
#include <numbers>

#include "isd/errors.hpp"

namespace isd {

void ConditioningNetwork::validate() const {
    if (!(series_r > 0.0)) throw ConfigError("conditioning: series R must be > 0");
    if (!(parallel_c >= 0.0)) throw ConfigError("conditioning: parallel C must be >= 0");
    if (!(sensor_c_internal > 0.0)) throw ConfigError("conditioning: sensor C must be > 0");
    if (!(pulse_threshold_fraction > 0.0 && pulse_threshold_fraction < 1.0)) {
        throw ConfigError("conditioning: pulse threshold fraction must be in (0, 1)");
    }
}

std::vector<ChargePulse> extract_charge_pulses(const Trace& ac, const ConditioningNetwork& net) {
    std::vector<ChargePulse> pulses;
    double peak = 0.0;
    for (double v : ac.samples) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return pulses;
    const double threshold = net.pulse_threshold_fraction * peak;

    int sign = 0;
    std::size_t best = 0;
    for (std::size_t i = 0; i <= ac.size(); ++i) {
        const double v = i < ac.size() ? ac.samples[i] : 0.0;
        const int s = v > threshold ? 1 : (v < -threshold ? -1 : 0);
        if (s != sign) {
            if (sign != 0) {
                pulses.push_back({ac.time(best), net.sensor_c_internal * ac.samples[best]});
            }
            sign = s;
            best = i;
        } else if (s != 0 && std::abs(v) > std::abs(ac.samples[best])) {
            best = i;
        }
    }
    return pulses;
}

double shaped_amplitude(double charge, const ConditioningNetwork& net) {
    return charge / net.total_capacitance();
}

double shaped_half_width(const ConditioningNetwork& net) {
    return net.time_constant() * std::numbers::ln2;
}

Trace shape_pulse(const Trace& ac, const ConditioningNetwork& net) {
    ac.validate();
    if (ac.channel != Channel::VoltageAC) throw ConfigError("shape_pulse: expected an AC trace");
    net.validate();

    Trace out{ac.t0, ac.dt, std::vector<double>(ac.size(), 0.0), Channel::VoltageAC};
    std::vector<double> injected(ac.size(), 0.0);
    for (const auto& p : extract_charge_pulses(ac, net)) {
        const auto i = static_cast<std::size_t>(std::llround((p.time - ac.t0) / ac.dt));
        injected[i] += shaped_amplitude(p.charge, net);
    }
    const double decay = std::exp(-ac.dt / net.time_constant());
    double v = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        v = v * decay + injected[i];
        out.samples[i] = v;
    }
    return out;
}

void HarvestConfig::validate() const {
    if (!(frequency > 0.0)) throw ConfigError("harvest: frequency must be > 0");
    if (!(storage_c > 0.0)) throw ConfigError("harvest: storage C must be > 0");
    if (pulses_per_cycle != 1 && pulses_per_cycle != 2) {
        throw ConfigError("harvest: pulses per cycle must be 1 or 2");
    }
    if (!(charge_per_pulse >= 0.0)) throw ConfigError("harvest: charge per pulse must be >= 0");
    if (!(duration > 0.0)) throw ConfigError("harvest: duration must be > 0");
    if (!(diode_drop >= 0.0)) throw ConfigError("harvest: diode drop must be >= 0");
    if (!(sample_rate > 0.0)) throw ConfigError("harvest: sample rate must be > 0");
    if (std::isnan(source_peak)) throw ConfigError("harvest: source peak must be a number");
}

Trace harvest(const HarvestConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(std::llround(cfg.duration * cfg.sample_rate)) + 1;
    Trace out{0.0, 1.0 / cfg.sample_rate, std::vector<double>(n, 0.0), Channel::VoltageDC};

    // Pulse k (k >= 1) arrives at k / pulse_rate; counted by integer index to
    // avoid drift over long runs.
    const double rate = cfg.pulse_rate();
    const double dv = cfg.charge_per_pulse / cfg.storage_c;
    std::uint64_t delivered = 0;
    std::uint64_t next = 1;
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / cfg.sample_rate;
        const auto due = static_cast<std::uint64_t>(std::floor(t * rate + 1e-9));
        for (; next <= due; ++next) {
            if (cfg.source_peak > v + 2.0 * cfg.diode_drop) {
                ++delivered;
                v = static_cast<double>(delivered) * dv;
            }
        }
        out.samples[i] = v;
    }
    return out;
}

}  // namespace isd
