#include "isd/fits.hpp"

#include <cmath>

#include "isd/errors.hpp"

namespace isd {

std::size_t PiecewiseFit::segment_of(double pressure) const {
    std::size_t j = 0;
    while (j < breakpoints.size() && pressure >= breakpoints[j]) ++j;
    return j;
}

double PiecewiseFit::evaluate(double pressure) const {
    const std::size_t j = segment_of(pressure);
    return slopes[j] * pressure + intercepts[j];
}

void PiecewiseFit::validate() const {
    if (slopes.empty() || intercepts.size() != slopes.size() ||
        breakpoints.size() + 1 != slopes.size()) {
        throw ConfigError("piecewise fit: inconsistent segment counts");
    }
    for (std::size_t j = 0; j < breakpoints.size(); ++j) {
        if (j > 0 && !(breakpoints[j] > breakpoints[j - 1])) {
            throw ConfigError("piecewise fit: breakpoints must increase");
        }
        const double b = breakpoints[j];
        const double left = slopes[j] * b + intercepts[j];
        const double right = slopes[j + 1] * b + intercepts[j + 1];
        if (std::abs(left - right) > 1e-9 * std::max(1.0, std::abs(left))) {
            throw ConfigError("piecewise fit: discontinuous at breakpoint " + std::to_string(j));
        }
    }
}

double ExpFit::evaluate(double pressure) const {
    return -v_max * std::expm1(-k * pressure);
}

double ExpFit::sensitivity(double pressure) const {
    return v_max * k * std::exp(-k * pressure);
}

}  // namespace isd
