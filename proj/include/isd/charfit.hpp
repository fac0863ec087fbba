#pragma once

#include <span>
#include <vector>

#include "isd/fits.hpp"
#include "isd/gradient.hpp"
#include "isd/trace.hpp"
#include "isd/transducer.hpp"

namespace isd {

struct PVPoint {
    double pressure;  // Pa
    double voltage;   // V
};

struct PVSamples {
    std::vector<PVPoint> points;
    ResponseMode mode = ResponseMode::Static;

    // >= 4 points, strictly increasing pressure, all finite.
    void validate() const;
};

// Continuous piecewise-linear least squares with n_segments in [1, 4].
// Breakpoints are searched exhaustively over data midpoints (each segment
// keeping >= 2 points), then refined jointly with the line parameters by
// damped Gauss-Newton. Ties resolve to the lexicographically smallest
// breakpoint vector.
PiecewiseFit fit_piecewise(const PVSamples& data, int n_segments);

// V_max (1 - exp(-kP)) by log-grid search over k with V_max in closed form,
// golden-section refinement of the profile, then a damped Gauss-Newton
// polish on (V_max, k). Throws FitError unless V correlates positively with
// P and the positive pressures span at least a decade.
ExpFit fit_exponential(const PVSamples& data);

struct SensitivityRow {
    double p_lo;         // Pa
    double p_hi;         // Pa
    double sensitivity;  // V/Pa
};

// One row per segment.
std::vector<SensitivityRow> sensitivity_report(const PiecewiseFit& fit);
// One row per requested pressure (p_lo == p_hi).
std::vector<SensitivityRow> sensitivity_report(const ExpFit& fit,
                                               std::span<const double> pressures);

struct ResponseTimes {
    double rise;  // s, 10 % -> 90 % of the step amplitude
    double fall;  // s, 90 % -> 10 %
};

// Expects one loading and one unloading transition between stable
// baselines. Crossing times are linearly interpolated between samples.
ResponseTimes extract_response_times(const Trace& step);

struct DetectionGrid {
    double min_pa = 0.01;
    double max_pa = 1e5;
    int points_per_decade = 200;
};

// Noise-free AC peak produced by a single 30 ms tap of the given amplitude.
double tap_peak_response(const SensorParams& params, const ResponseDynamics& dyn,
                         double pressure);

// Smallest grid pressure whose tap response reaches criterion * noise_rms.
// Returns +inf when no grid point does.
double detection_limit(const SensorParams& params, const ResponseDynamics& dyn,
                       double criterion = 3.0, const DetectionGrid& grid = {});

}  // namespace isd
