#include "isd/gradient.hpp"

#include <algorithm>

#include "isd/errors.hpp"

namespace isd {

void GradientStack::validate() const {
    if (!(layer_thickness > 0.0)) throw ConfigError("gradient: layer thickness must be > 0");
    if (!(smoothing_fraction >= 0.0 && smoothing_fraction <= 1.0)) {
        throw ConfigError("gradient: smoothing fraction must be in [0, 1]");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (!(layers[i].area > 0.0)) throw ConfigError("gradient: layer area must be > 0");
        if (i == 0) {
            if (!(layers[0].engage_pressure >= 0.0)) {
                throw ConfigError("gradient: first engage pressure must be >= 0");
            }
            continue;
        }
        if (!(layers[i].area > layers[i - 1].area)) {
            throw ConfigError("gradient: layer areas must increase top to bottom");
        }
        if (!(layers[i].engage_pressure > layers[i - 1].engage_pressure)) {
            throw ConfigError("gradient: engage pressures must increase top to bottom");
        }
    }
}

GradientStack GradientStack::five_layer(double first_pa, double last_pa) {
    constexpr double depth = 0.045;
    constexpr double widths[] = {0.009, 0.018, 0.027, 0.036, 0.045};
    GradientStack stack;
    const double step = (last_pa - first_pa) / 4.0;
    for (int i = 0; i < 5; ++i) {
        stack.layers.push_back({widths[i] * depth, first_pa + step * i});
    }
    return stack;
}

double engaged_area(const GradientStack& stack, double pressure) {
    double area = 0.0;
    for (const auto& layer : stack.layers) {
        if (layer.engage_pressure > pressure) break;
        area = layer.area;
    }
    return area;
}

double smoothed_engaged_area(const GradientStack& stack, double pressure) {
    // Each layer ramps up on its own; the widest face in contact wins.
    double area = 0.0;
    for (const auto& layer : stack.layers) {
        const double width = stack.smoothing_fraction * layer.engage_pressure;
        double frac = 0.0;
        if (pressure >= layer.engage_pressure) {
            frac = 1.0;
        } else if (width > 0.0 && pressure > layer.engage_pressure - width) {
            frac = (pressure - (layer.engage_pressure - width)) / width;
        }
        area = std::max(area, frac * layer.area);
    }
    return area;
}

double gradient_static_response(const GradientStack& stack, const StaticParams& base,
                                double pressure) {
    const double engaged = smoothed_engaged_area(stack, pressure);
    if (engaged <= 0.0) return 0.0;
    StaticParams full = base;
    full.geometry.area0 = stack.bottom_area();
    return static_voltage(full, pressure) * (engaged / full.geometry.area0);
}

double gradient_dynamic_response(const GradientStack& stack, const DynamicParams& base,
                                 double pressure, PermittivityMode mode) {
    const double engaged = smoothed_engaged_area(stack, pressure);
    if (engaged <= 0.0) return 0.0;
    const double full_area = stack.bottom_area();
    return cycle_charge(base, engaged, pressure) /
           min_capacitance(base.geometry, full_area, mode);
}

}  // namespace isd
