#include "isd/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "isd/errors.hpp"

namespace isd {

std::size_t ExcitationSpec::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

void ExcitationSpec::validate() const {
    if (!(duration > 0.0)) throw ConfigError("excitation: duration must be > 0");
    if (!(sample_rate > 0.0)) throw ConfigError("excitation: sample rate must be > 0");
    if (!(amplitude >= 0.0)) throw ConfigError("excitation: amplitude must be >= 0");
    if (!(noise_rms >= 0.0)) throw ConfigError("excitation: noise must be >= 0");
    if (sample_count() == 0) throw ConfigError("excitation: duration shorter than one sample");
    if (periodic()) {
        if (!(frequency > 0.0)) throw ConfigError("excitation: frequency must be > 0");
        if (sample_rate < 20.0 * frequency) {
            throw ConfigError("excitation: sample rate must be >= 20 x frequency");
        }
    }
    if (kind == ExcitationKind::Square && !(duty > 0.0 && duty < 1.0)) {
        throw ConfigError("excitation: duty must be in (0, 1)");
    }
    if (kind == ExcitationKind::TapTrain &&
        !(tap_width > 0.0 && tap_width <= 1.0 / frequency)) {
        throw ConfigError("excitation: tap width must be in (0, 1/frequency]");
    }
    if (kind == ExcitationKind::WeightSteps) {
        if (!(device_area > 0.0)) {
            throw ConfigError("excitation: weight steps need a device area > 0");
        }
        for (const auto& s : steps) {
            if (!(s.mass >= 0.0) || !(s.duration > 0.0)) {
                throw ConfigError("excitation: weight steps need mass >= 0 and duration > 0");
            }
        }
    }
}

namespace {

double periodic_phase(std::size_t i, const ExcitationSpec& spec) {
    const double cycles = static_cast<double>(i) * spec.frequency / spec.sample_rate;
    return cycles - std::floor(cycles);
}

double weight_pressure(double t, const ExcitationSpec& spec) {
    double start = 0.0;
    for (const auto& s : spec.steps) {
        if (t < start + s.duration) return s.mass * kStandardGravity / spec.device_area;
        start += s.duration;
    }
    return 0.0;
}

}  // namespace

Trace generate(const ExcitationSpec& spec) {
    spec.validate();
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const std::size_t n = spec.sample_count();
    Trace out;
    out.dt = 1.0 / spec.sample_rate;
    out.channel = Channel::PressurePa;
    out.samples.resize(n);
    const double period = spec.kind == ExcitationKind::TapTrain ? 1.0 / spec.frequency : 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.sample_rate;
        double p = 0.0;
        switch (spec.kind) {
            case ExcitationKind::Constant:
                p = spec.amplitude;
                break;
            case ExcitationKind::Sine:
                p = spec.amplitude * 0.5 * (1.0 - std::cos(two_pi * periodic_phase(i, spec)));
                break;
            case ExcitationKind::Square:
                p = periodic_phase(i, spec) < spec.duty ? spec.amplitude : 0.0;
                break;
            case ExcitationKind::TapTrain: {
                const double into = periodic_phase(i, spec) * period;
                if (into < spec.tap_width) {
                    p = spec.amplitude * 0.5 * (1.0 - std::cos(two_pi * into / spec.tap_width));
                }
                break;
            }
            case ExcitationKind::WeightSteps:
                p = weight_pressure(t, spec);
                break;
        }
        out.samples[i] = p;
    }

    if (spec.noise_rms > 0.0) {
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> noise(0.0, spec.noise_rms);
        for (double& p : out.samples) p = std::max(0.0, p + noise(rng));
    }
    return out;
}

}  // namespace isd
