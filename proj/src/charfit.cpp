#include "isd/charfit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "isd/errors.hpp"
#include "isd/excitation.hpp"

namespace isd {

void PVSamples::validate() const {
    if (points.size() < 4) throw FitError("need at least 4 pressure-voltage points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].pressure) || !std::isfinite(points[i].voltage)) {
            throw FitError("non-finite sample at index " + std::to_string(i));
        }
        if (i > 0 && !(points[i].pressure > points[i - 1].pressure)) {
            throw FitError("pressures must be strictly increasing (index " + std::to_string(i) +
                           ")");
        }
    }
}

namespace {

// Fits run on pressure in kPa and voltage divided by max |V|.
struct Scaled {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    double v_scale = 1.0;
};

constexpr double kPaPerKpa = 1000.0;

Scaled rescale(const PVSamples& data) {
    Scaled s;
    const auto n = static_cast<Eigen::Index>(data.points.size());
    s.x.resize(n);
    s.y.resize(n);
    double vmax = 0.0;
    for (const auto& p : data.points) vmax = std::max(vmax, std::abs(p.voltage));
    s.v_scale = vmax > 0.0 ? vmax : 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        s.x[i] = data.points[static_cast<std::size_t>(i)].pressure / kPaPerKpa;
        s.y[i] = data.points[static_cast<std::size_t>(i)].voltage / s.v_scale;
    }
    return s;
}

// ---- piecewise ---------------------------------------------------------

// Columns: 1, x, (x - tau_1)+, ..., (x - tau_{n-1})+.
Eigen::MatrixXd hinge_design(const Eigen::VectorXd& x, const std::vector<double>& taus) {
    Eigen::MatrixXd a(x.size(), 2 + static_cast<Eigen::Index>(taus.size()));
    a.col(0).setOnes();
    a.col(1) = x;
    for (std::size_t j = 0; j < taus.size(); ++j) {
        a.col(2 + static_cast<Eigen::Index>(j)) = (x.array() - taus[j]).max(0.0).matrix();
    }
    return a;
}

struct LinearSolution {
    Eigen::VectorXd coef;
    double sse;
};

LinearSolution solve_hinges(const Scaled& s, const std::vector<double>& taus) {
    const Eigen::MatrixXd a = hinge_design(s.x, taus);
    Eigen::VectorXd coef = a.colPivHouseholderQr().solve(s.y);
    return {coef, (a * coef - s.y).squaredNorm()};
}

// Every segment must keep at least two points.
bool segments_populated(const Eigen::VectorXd& x, const std::vector<double>& taus) {
    double lo = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= taus.size(); ++j) {
        const double hi = j < taus.size() ? taus[j] : std::numeric_limits<double>::infinity();
        if (!(hi > lo)) return false;
        int count = 0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] >= lo && x[i] < hi) ++count;
        }
        if (count < 2) return false;
        lo = hi;
    }
    return true;
}

// Lexicographic enumeration of midpoint indices; strict improvement keeps
// the first (smallest) vector on ties.
void search_breakpoints(const Scaled& s, int remaining, std::size_t first_index,
                        std::vector<std::size_t>& chosen, std::vector<double>& best_taus,
                        double& best_sse) {
    const auto n = static_cast<std::size_t>(s.x.size());
    if (remaining == 0) {
        std::vector<double> taus;
        for (std::size_t i : chosen) taus.push_back(0.5 * (s.x[i] + s.x[i + 1]));
        const double sse = solve_hinges(s, taus).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best_taus = std::move(taus);
        }
        return;
    }
    // Midpoint i splits after point i; leave >= 2 points for each later segment.
    const std::size_t last = n - 1 - 2 * static_cast<std::size_t>(remaining);
    for (std::size_t i = first_index; i <= last; ++i) {
        chosen.push_back(i);
        search_breakpoints(s, remaining - 1, i + 2, chosen, best_taus, best_sse);
        chosen.pop_back();
    }
}

// Joint damped Gauss-Newton over line coefficients and breakpoints.
std::vector<double> refine_breakpoints(const Scaled& s, std::vector<double> taus) {
    if (taus.empty()) return taus;
    const auto nb = static_cast<Eigen::Index>(taus.size());
    const Eigen::Index p = 2 + 2 * nb;
    Eigen::VectorXd theta(p);
    LinearSolution lin = solve_hinges(s, taus);
    theta.head(2 + nb) = lin.coef;
    for (Eigen::Index j = 0; j < nb; ++j) theta[2 + nb + j] = taus[static_cast<std::size_t>(j)];

    auto unpack = [&](const Eigen::VectorXd& t) {
        std::vector<double> out(static_cast<std::size_t>(nb));
        for (Eigen::Index j = 0; j < nb; ++j) out[static_cast<std::size_t>(j)] = t[2 + nb + j];
        return out;
    };
    auto residuals = [&](const Eigen::VectorXd& t) {
        return Eigen::VectorXd(hinge_design(s.x, unpack(t)) * t.head(2 + nb) - s.y);
    };

    double sse = lin.sse;
    double lambda = 1e-3;
    bool converged = false;
    for (int iter = 0; iter < 200 && sse > 0.0 && !converged; ++iter) {
        const std::vector<double> cur = unpack(theta);
        Eigen::MatrixXd jac(s.x.size(), p);
        jac.leftCols(2 + nb) = hinge_design(s.x, cur);
        for (Eigen::Index j = 0; j < nb; ++j) {
            const double c = theta[2 + j];
            const double tau = cur[static_cast<std::size_t>(j)];
            for (Eigen::Index i = 0; i < s.x.size(); ++i) {
                jac(i, 2 + nb + j) = s.x[i] > tau ? -c : 0.0;
            }
        }
        const Eigen::VectorXd r = residuals(theta);
        const Eigen::MatrixXd h = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;

        bool accepted = false;
        while (lambda < 1e12) {
            Eigen::MatrixXd damped = h;
            for (Eigen::Index k = 0; k < p; ++k) {
                damped(k, k) += lambda * std::max(h(k, k), 1e-12);
            }
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            const Eigen::VectorXd trial = theta + step;
            const std::vector<double> trial_taus = unpack(trial);
            if (step.allFinite() && segments_populated(s.x, trial_taus)) {
                const double trial_sse = residuals(trial).squaredNorm();
                if (trial_sse < sse) {
                    const double gain = sse - trial_sse;
                    theta = trial;
                    sse = trial_sse;
                    lambda = std::max(lambda * 0.1, 1e-15);
                    accepted = true;
                    converged = gain <= 1e-15 * sse ||
                                step.norm() <= 1e-15 * (1.0 + theta.norm());
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
    }
    return unpack(theta);
}

// Grid seed refined, plus every single-breakpoint extension of the best
// placement with one fewer breakpoint, so extra segments never fit worse.
std::vector<double> best_breakpoints(const Scaled& s, int count) {
    std::vector<double> best;
    double best_sse = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> chosen;
    search_breakpoints(s, count, 1, chosen, best, best_sse);
    if (!std::isfinite(best_sse)) throw FitError("no admissible breakpoint placement");
    auto consider = [&](const std::vector<double>& taus) {
        const std::vector<double> refined = refine_breakpoints(s, taus);
        for (const auto* t : {&taus, &refined}) {
            if (!segments_populated(s.x, *t)) continue;
            const double sse = solve_hinges(s, *t).sse;
            if (sse < best_sse) {
                best_sse = sse;
                best = *t;
            }
        }
    };
    consider(best);
    if (count > 1) {
        const std::vector<double> fewer = best_breakpoints(s, count - 1);
        for (Eigen::Index i = 0; i + 1 < s.x.size(); ++i) {
            std::vector<double> taus = fewer;
            taus.push_back(0.5 * (s.x[i] + s.x[i + 1]));
            std::sort(taus.begin(), taus.end());
            if (segments_populated(s.x, taus)) consider(taus);
        }
    }
    return best;
}

// ---- exponential -------------------------------------------------------

struct Profile {
    double amplitude;
    double sse;
};

Profile exp_profile(const Scaled& s, double rate) {
    double gy = 0.0, gg = 0.0;
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
        const double g = -std::expm1(-rate * s.x[i]);
        gy += g * s.y[i];
        gg += g * g;
    }
    const double amp = gg > 0.0 ? gy / gg : 0.0;
    double sse = 0.0;
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
        const double r = s.y[i] - amp * -std::expm1(-rate * s.x[i]);
        sse += r * r;
    }
    return {amp, sse};
}

double pearson(const Scaled& s) {
    const double mx = s.x.mean();
    const double my = s.y.mean();
    const double sxy = ((s.x.array() - mx) * (s.y.array() - my)).sum();
    const double sxx = (s.x.array() - mx).square().sum();
    const double syy = (s.y.array() - my).square().sum();
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

PiecewiseFit fit_piecewise(const PVSamples& data, int n_segments) {
    data.validate();
    if (n_segments < 1 || n_segments > 4) throw FitError("segment count must be in [1, 4]");
    if (data.points.size() < 2 * static_cast<std::size_t>(n_segments)) {
        throw FitError("insufficient points: " + std::to_string(n_segments) +
                       " segments need at least " + std::to_string(2 * n_segments));
    }
    const Scaled s = rescale(data);
    const std::vector<double> taus = best_breakpoints(s, n_segments - 1);
    const LinearSolution lin = solve_hinges(s, taus);

    PiecewiseFit fit;
    fit.p_min = data.points.front().pressure;
    fit.p_max = data.points.back().pressure;
    double slope = lin.coef[1];
    double intercept = lin.coef[0];
    const double vs = s.v_scale;
    fit.slopes.push_back(slope * vs / kPaPerKpa);
    fit.intercepts.push_back(intercept * vs);
    for (std::size_t j = 0; j < taus.size(); ++j) {
        const double c = lin.coef[2 + static_cast<Eigen::Index>(j)];
        slope += c;
        intercept -= c * taus[j];
        fit.breakpoints.push_back(taus[j] * kPaPerKpa);
        fit.slopes.push_back(slope * vs / kPaPerKpa);
        fit.intercepts.push_back(intercept * vs);
    }
    fit.sse = lin.sse * vs * vs;
    fit.rmse = std::sqrt(fit.sse / static_cast<double>(data.points.size()));
    return fit;
}

ExpFit fit_exponential(const PVSamples& data) {
    data.validate();
    const Scaled s = rescale(data);
    if (pearson(s) <= 0.0) throw FitError("voltage does not increase with pressure");

    double x_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
        if (s.x[i] > 0.0) x_min = std::min(x_min, s.x[i]);
    }
    const double x_max = s.x.maxCoeff();
    if (!std::isfinite(x_min) || x_max < 10.0 * x_min) {
        throw FitError("pressures must span at least one decade");
    }

    // Coarse log grid over k (1/kPa).
    const double log_lo = std::log10(1e-3 / x_max);
    const double log_hi = std::log10(1e3 / x_min);
    const int per_decade = 40;
    const int count = static_cast<int>(std::ceil((log_hi - log_lo) * per_decade)) + 1;
    auto grid_rate = [&](int i) {
        return std::pow(10.0, log_lo + (log_hi - log_lo) * i / (count - 1));
    };
    int best = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        const double sse = exp_profile(s, grid_rate(i)).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best = i;
        }
    }

    ExpFit fit;
    fit.at_bound = best == 0 || best == count - 1;

    // Golden-section on log k inside the neighbouring grid cells.
    double a = std::log(grid_rate(std::max(best - 1, 0)));
    double b = std::log(grid_rate(std::min(best + 1, count - 1)));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = exp_profile(s, std::exp(c)).sse;
    double fd = exp_profile(s, std::exp(d)).sse;
    while (b - a > 1e-12) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = exp_profile(s, std::exp(c)).sse;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = exp_profile(s, std::exp(d)).sse;
        }
    }
    double rate = std::exp(0.5 * (a + b));
    double amp = exp_profile(s, rate).amplitude;

    // Damped Gauss-Newton polish on (amplitude, rate).
    auto sse_of = [&](double am, double k) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < s.x.size(); ++i) {
            const double r = am * -std::expm1(-k * s.x[i]) - s.y[i];
            total += r * r;
        }
        return total;
    };
    double sse = sse_of(amp, rate);
    double lambda = 1e-6;
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
        grad.setZero();
        for (Eigen::Index i = 0; i < s.x.size(); ++i) {
            const double e = std::exp(-rate * s.x[i]);
            const Eigen::Vector2d j(-std::expm1(-rate * s.x[i]), amp * s.x[i] * e);
            const double r = amp * j[0] - s.y[i];
            h += j * j.transpose();
            grad += j * r;
        }
        if (grad.norm() < 1e-9) break;
        bool accepted = false;
        while (lambda < 1e12) {
            Eigen::Matrix2d damped = h;
            damped.diagonal() *= 1.0 + lambda;
            const Eigen::Vector2d step = damped.ldlt().solve(-grad);
            const double na = amp + step[0];
            const double nk = rate + step[1];
            if (nk > 0.0 && step.allFinite()) {
                const double trial = sse_of(na, nk);
                if (trial <= sse) {
                    amp = na;
                    rate = nk;
                    sse = trial;
                    lambda = std::max(lambda * 0.1, 1e-15);
                    accepted = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
    }

    fit.v_max = amp * s.v_scale;
    fit.k = rate / kPaPerKpa;
    fit.rmse = std::sqrt(sse / static_cast<double>(s.x.size())) * s.v_scale;
    if (!(fit.v_max > 0.0)) throw FitError("fitted saturation voltage is not positive");
    return fit;
}

std::vector<SensitivityRow> sensitivity_report(const PiecewiseFit& fit) {
    std::vector<SensitivityRow> rows;
    for (std::size_t j = 0; j < fit.segments(); ++j) {
        const double lo = j == 0 ? fit.p_min : fit.breakpoints[j - 1];
        const double hi = j + 1 == fit.segments() ? fit.p_max : fit.breakpoints[j];
        rows.push_back({lo, hi, fit.slopes[j]});
    }
    return rows;
}

std::vector<SensitivityRow> sensitivity_report(const ExpFit& fit,
                                               std::span<const double> pressures) {
    std::vector<SensitivityRow> rows;
    for (double p : pressures) rows.push_back({p, p, fit.sensitivity(p)});
    return rows;
}

namespace {

// First index >= from where the normalised signal crosses `level` in the
// given direction; returns the interpolated crossing time.
bool find_crossing(const Trace& tr, double base, double amp, double level, bool upward,
                   std::size_t from, std::size_t& index, double& time) {
    auto norm = [&](std::size_t i) { return (tr.samples[i] - base) / amp; };
    for (std::size_t i = std::max<std::size_t>(from, 1); i < tr.size(); ++i) {
        const double prev = norm(i - 1);
        const double cur = norm(i);
        const bool crossed = upward ? (prev < level && cur >= level)
                                    : (prev > level && cur <= level);
        if (crossed) {
            index = i;
            time = tr.time(i - 1) + (level - prev) / (cur - prev) * tr.dt;
            return true;
        }
    }
    return false;
}

}  // namespace

ResponseTimes extract_response_times(const Trace& step) {
    step.validate();
    if (step.size() < 3) throw DetectionError("step trace too short");
    const std::size_t head = std::max<std::size_t>(1, step.size() / 50);
    double base = 0.0;
    for (std::size_t i = 0; i < head; ++i) base += step.samples[i];
    base /= static_cast<double>(head);

    std::size_t extreme = 0;
    for (std::size_t i = 0; i < step.size(); ++i) {
        if (std::abs(step.samples[i] - base) > std::abs(step.samples[extreme] - base)) {
            extreme = i;
        }
    }
    const double amp = step.samples[extreme] - base;
    if (amp == 0.0) throw DetectionError("no transition in trace");

    std::size_t i10 = 0, i90 = 0, f90 = 0, f10 = 0;
    double t10 = 0, t90 = 0, u90 = 0, u10 = 0;
    if (!find_crossing(step, base, amp, 0.1, true, 1, i10, t10) ||
        !find_crossing(step, base, amp, 0.9, true, i10, i90, t90)) {
        throw DetectionError("no rising 10-90 % transition found");
    }
    if (!find_crossing(step, base, amp, 0.9, false, std::max(i90, extreme), f90, u90) ||
        !find_crossing(step, base, amp, 0.1, false, f90, f10, u10)) {
        throw DetectionError("no falling 90-10 % transition found");
    }
    return {t90 - t10, u10 - u90};
}

double tap_peak_response(const SensorParams& params, const ResponseDynamics& dyn,
                         double pressure) {
    ExcitationSpec tap;
    tap.kind = ExcitationKind::TapTrain;
    tap.amplitude = pressure;
    tap.frequency = 5.0;
    tap.tap_width = 0.030;
    tap.duration = 0.2;
    tap.sample_rate = 1000.0;
    ResponseDynamics quiet = dyn;
    quiet.noise_rms = 0.0;
    const auto sim = simulate(generate(tap), params, CEState::off(), quiet);
    double peak = 0.0;
    for (double v : sim.ac.samples) peak = std::max(peak, std::abs(v));
    return peak;
}

double detection_limit(const SensorParams& params, const ResponseDynamics& dyn,
                       double criterion, const DetectionGrid& grid) {
    dyn.validate();
    if (!(grid.min_pa > 0.0 && grid.max_pa > grid.min_pa && grid.points_per_decade > 0)) {
        throw ConfigError("detection grid must satisfy 0 < min < max, points > 0");
    }
    const double threshold = criterion * dyn.noise_rms;
    const double decades = std::log10(grid.max_pa / grid.min_pa);
    const int count = static_cast<int>(std::ceil(decades * grid.points_per_decade)) + 1;
    auto pressure_at = [&](int i) {
        return std::min(grid.max_pa,
                        grid.min_pa * std::pow(10.0, static_cast<double>(i) / grid.points_per_decade));
    };
    auto detected = [&](int i) { return tap_peak_response(params, dyn, pressure_at(i)) >= threshold; };

    // Tap response is monotone in amplitude, so bisect over grid indices.
    if (detected(0)) return pressure_at(0);
    if (!detected(count - 1)) return std::numeric_limits<double>::infinity();
    int lo = 0, hi = count - 1;
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (detected(mid) ? hi : lo) = mid;
    }
    return pressure_at(hi);
}

}  // namespace isd
