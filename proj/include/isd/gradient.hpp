#pragma once

#include <vector>

#include "isd/physics.hpp"

namespace isd {

// Stepped pyramid of conductive sponge layers pressed against a flat film.
// Layers are ordered top (smallest, engages first) to bottom (widest).
struct GradientLayer {
    double area;              // m^2
    double engage_pressure;   // Pa at which this layer's face is in full contact
};

struct GradientStack {
    std::vector<GradientLayer> layers;
    double layer_thickness = 2e-3;
    // Ramp width below each threshold, as a fraction of that threshold.
    double smoothing_fraction = 0.05;

    void validate() const;
    double bottom_area() const { return layers.empty() ? 0.0 : layers.back().area; }

    // Five 4.5 cm deep layers, 0.9..4.5 cm wide, thresholds evenly spaced
    // over [first_pa, last_pa].
    static GradientStack five_layer(double first_pa = 6.0, double last_pa = 3600.0);
};

// Footprint of the deepest engaged layer; 0 before the first threshold.
double engaged_area(const GradientStack& stack, double pressure);

// Continuous version: each layer's footprint ramps in linearly over
// [(1 - smoothing_fraction) * threshold, threshold] and the largest ramped
// footprint is taken. Equals engaged_area at and above every threshold as
// long as no ramp reaches back past the previous threshold.
double smoothed_engaged_area(const GradientStack& stack, double pressure);

enum class ResponseMode { Static, Dynamic };

// Voltage of a gradient-structured sensor. Transferred charge scales with
// the engaged fraction of the bottom-layer footprint while the capacitance
// is that of the full footprint, so full engagement reproduces the planar
// model with area0 = bottom_area() and zero engagement gives 0 V.
double gradient_static_response(const GradientStack& stack, const StaticParams& base,
                                double pressure);
double gradient_dynamic_response(const GradientStack& stack, const DynamicParams& base,
                                 double pressure,
                                 PermittivityMode mode = PermittivityMode::Corrected);

}  // namespace isd
