#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "isd/control.hpp"
#include "isd/fits.hpp"
#include "isd/trace.hpp"

namespace support {

// Continuous curve through the origin with the given per-kPa slopes.
inline isd::PiecewiseFit curve(std::vector<double> slopes_per_kpa, std::vector<double> breaks_pa = {}) {
    isd::PiecewiseFit f;
    f.breakpoints = breaks_pa;
    double intercept = 0.0;
    for (std::size_t j = 0; j < slopes_per_kpa.size(); ++j) {
        const double s = slopes_per_kpa[j] / 1000.0;
        if (j > 0) {
            const double b = breaks_pa[j - 1];
            intercept = f.slopes.back() * b + f.intercepts.back() - s * b;
        }
        f.slopes.push_back(s);
        f.intercepts.push_back(intercept);
    }
    f.p_min = 0.0;
    f.p_max = 5e4;
    return f;
}

inline isd::Trace step_trace(double level, double t_on, double t_off, double duration,
                             double rate = 1000.0) {
    isd::Trace tr;
    tr.dt = 1.0 / rate;
    const auto n = static_cast<std::size_t>(std::llround(duration * rate));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        tr.samples.push_back(t >= t_on && t < t_off ? level : 0.0);
    }
    return tr;
}

// Count same-sign excursions of |x| above a threshold.
inline int count_excursions(const std::vector<double>& x, double threshold) {
    int n = 0;
    int state = 0;
    for (double v : x) {
        const int s = v > threshold ? 1 : (v < -threshold ? -1 : 0);
        if (s != 0 && s != state) ++n;
        state = s;
    }
    return n;
}

inline double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// Median Bend level of each run of commands spaced at the control rate.
inline std::vector<double> plateau_levels(const std::vector<isd::ControlCommand>& cmds, double rate) {
    std::vector<std::vector<double>> runs;
    double prev_t = -1e300;
    for (const auto& c : cmds) {
        if (c.kind != isd::CommandKind::Bend) continue;
        if (c.t - prev_t > 1.5 / rate) runs.emplace_back();
        runs.back().push_back(c.level);
        prev_t = c.t;
    }
    std::vector<double> out;
    for (auto& r : runs) {
        std::nth_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(r.size() / 2), r.end());
        out.push_back(r[r.size() / 2]);
    }
    return out;
}

}  // namespace support
