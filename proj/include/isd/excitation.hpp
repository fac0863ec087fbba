#pragma once

#include <cstdint>
#include <vector>

#include "isd/trace.hpp"

namespace isd {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

enum class ExcitationKind { Square, Sine, WeightSteps, TapTrain, Constant };

struct WeightStep {
    double mass;      // kg
    double duration;  // s
};

struct ExcitationSpec {
    ExcitationKind kind = ExcitationKind::Sine;
    double amplitude = 1000.0;     // Pa
    double frequency = 2.0;        // Hz; Square, Sine, TapTrain
    double duty = 0.5;             // Square: pressed fraction of each period
    double tap_width = 0.030;      // s, raised-cosine tap length
    std::vector<WeightStep> steps; // WeightSteps schedule, back to back from t=0
    double device_area = 0.0;      // m^2; required for WeightSteps
    double duration = 1.0;         // s
    double sample_rate = 1000.0;   // Hz
    double noise_rms = 0.0;        // Pa, additive; result clipped at 0
    std::uint64_t seed = 0;

    bool periodic() const {
        return kind == ExcitationKind::Square || kind == ExcitationKind::Sine ||
               kind == ExcitationKind::TapTrain;
    }
    std::size_t sample_count() const;
    void validate() const;
};

// Pressure trace (Pa) sampled at t = i / sample_rate, i in [0, round(duration*rate)).
Trace generate(const ExcitationSpec& spec);

}  // namespace isd
