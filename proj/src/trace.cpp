#include "isd/trace.hpp"

#include <cmath>
#include <string>

#include "isd/errors.hpp"

namespace isd {

std::string_view channel_column(Channel c) {
    switch (c) {
        case Channel::PressurePa: return "pressure_pa";
        case Channel::VoltageDC: return "voltage_dc_v";
        case Channel::VoltageAC: return "voltage_ac_v";
        case Channel::CurrentA: return "current_a";
        case Channel::ChargeC: return "charge_c";
    }
    return "unknown";
}

Channel channel_from_column(std::string_view column) {
    for (Channel c : {Channel::PressurePa, Channel::VoltageDC, Channel::VoltageAC,
                      Channel::CurrentA, Channel::ChargeC}) {
        if (channel_column(c) == column) return c;
    }
    throw ParseError("unknown channel column '" + std::string(column) + "'");
}

double Trace::at_time(double t) const {
    if (samples.empty()) return 0.0;
    const double pos = (t - t0) / dt;
    if (pos <= 0.0) return samples.front();
    const auto last = static_cast<double>(samples.size() - 1);
    if (pos >= last) return samples.back();
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return samples[i] + frac * (samples[i + 1] - samples[i]);
}

void Trace::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("trace: dt must be > 0");
    if (!std::isfinite(t0)) throw ConfigError("trace: t0 must be finite");
    if (samples.empty()) throw ConfigError("trace: no samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            throw ConfigError("trace: non-finite sample at index " + std::to_string(i));
        }
    }
}

}  // namespace isd
