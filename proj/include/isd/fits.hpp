#pragma once

#include <cstddef>
#include <vector>

namespace isd {

// Continuous piecewise-linear voltage-pressure curve. Segment j covers
// [breakpoints[j-1], breakpoints[j]); the end segments extrapolate.
struct PiecewiseFit {
    std::vector<double> breakpoints;  // Pa, n-1 entries
    std::vector<double> slopes;       // V/Pa
    std::vector<double> intercepts;   // V
    double rmse = 0.0;                // V
    double sse = 0.0;                 // V^2
    double p_min = 0.0;               // data range, Pa
    double p_max = 0.0;

    std::size_t segments() const { return slopes.size(); }
    std::size_t segment_of(double pressure) const;
    double evaluate(double pressure) const;
    void validate() const;
};

// V_max (1 - exp(-kP)).
struct ExpFit {
    double v_max = 0.0;  // V
    double k = 0.0;      // 1/Pa
    double rmse = 0.0;   // V
    bool at_bound = false;  // k pinned to the search interval edge

    double evaluate(double pressure) const;
    double sensitivity(double pressure) const;
};

}  // namespace isd
