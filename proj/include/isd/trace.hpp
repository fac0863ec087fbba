#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace isd {

enum class Channel { PressurePa, VoltageDC, VoltageAC, CurrentA, ChargeC };

// CSV column name for a channel, e.g. "pressure_pa".
std::string_view channel_column(Channel c);
Channel channel_from_column(std::string_view column);

// Uniformly sampled time series.
struct Trace {
    double t0 = 0.0;
    double dt = 1e-3;
    std::vector<double> samples;
    Channel channel = Channel::PressurePa;

    std::size_t size() const { return samples.size(); }
    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double duration() const { return static_cast<double>(samples.size()) * dt; }
    // Linear interpolation, clamped to the end samples.
    double at_time(double t) const;

    // dt > 0, non-empty, all samples finite. Throws ConfigError.
    void validate() const;
};

}  // namespace isd
