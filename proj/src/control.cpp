#include "isd/control.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "isd/errors.hpp"

namespace isd {

void ClassifierConfig::validate() const {
    if (!(dc_threshold > 0.0) || !(ac_threshold > 0.0)) {
        throw ConfigError("classify: thresholds must be > 0");
    }
    if (!(hold >= 0.0)) throw ConfigError("classify: hold must be >= 0");
    if (!(release_fraction > 0.0 && release_fraction <= 1.0)) {
        throw ConfigError("classify: release fraction must be in (0, 1]");
    }
    if (!(pair_factor >= 0.0)) throw ConfigError("classify: pair factor must be >= 0");
}

namespace {

std::vector<Event> find_plateaus(const Trace& dc, const ClassifierConfig& cfg) {
    std::vector<Event> out;
    std::size_t start = 0;
    bool inside = false;
    double sum = 0.0;
    for (std::size_t i = 0; i <= dc.size(); ++i) {
        const bool above = i < dc.size() && std::abs(dc.samples[i]) > cfg.dc_threshold;
        if (above) {
            if (!inside) {
                inside = true;
                start = i;
                sum = 0.0;
            }
            sum += dc.samples[i];
            continue;
        }
        if (!inside) continue;
        inside = false;
        const double t0 = dc.time(start);
        const double t1 = dc.time(i - 1);
        if (t1 - t0 + 1e-9 * dc.dt < cfg.hold) continue;
        const double mean = sum / static_cast<double>(i - start);
        out.push_back({EventKind::StaticPlateau, t0, t1, mean, mean < 0 ? -1 : 1, false});
    }
    return out;
}

struct Excursion {
    double t_start;
    double t_end;
    double peak;  // signed
};

std::vector<Excursion> find_excursions(const Trace& ac, const ClassifierConfig& cfg) {
    std::vector<Excursion> out;
    const double release = cfg.release_fraction * cfg.ac_threshold;
    int sign = 0;
    Excursion cur{};
    for (std::size_t i = 0; i < ac.size(); ++i) {
        const double v = ac.samples[i];
        if (sign != 0) {
            if (sign * v >= release) {
                if (std::abs(v) > std::abs(cur.peak)) cur.peak = v;
                cur.t_end = ac.time(i);
                continue;
            }
            out.push_back(cur);
            sign = 0;
        }
        if (std::abs(v) > cfg.ac_threshold) {
            sign = v > 0 ? 1 : -1;
            cur = {ac.time(i), ac.time(i), v};
        }
    }
    if (sign != 0) out.push_back(cur);
    return out;
}

}  // namespace

std::vector<Event> classify(const Trace& dc, const Trace& ac, const ClassifierConfig& cfg) {
    cfg.validate();
    dc.validate();
    ac.validate();
    std::vector<Event> events = find_plateaus(dc, cfg);

    const auto exc = find_excursions(ac, cfg);
    for (std::size_t i = 0; i < exc.size(); ++i) {
        const auto& a = exc[i];
        Event e{EventKind::DynamicSpike, a.t_start, a.t_end, std::abs(a.peak),
                a.peak < 0 ? -1 : 1, false};
        if (i + 1 < exc.size()) {
            const auto& b = exc[i + 1];
            const double width = std::max(a.t_end - a.t_start, ac.dt);
            const bool opposite = (a.peak < 0) != (b.peak < 0);
            if (opposite && b.t_start - a.t_end <= cfg.pair_factor * width) {
                e.t_end = b.t_end;
                e.amplitude = std::max(e.amplitude, std::abs(b.peak));
                e.bipolar = true;
                ++i;
            }
        }
        events.push_back(e);
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& x, const Event& y) { return x.t_start < y.t_start; });
    return events;
}

ControlCommand ControlCommand::bend(double t, double level) {
    return {t, CommandKind::Bend, std::clamp(level, 0.0, 1.0), 0};
}

ControlCommand ControlCommand::trigger(double t, int count) {
    return {t, CommandKind::Trigger, 0.0, std::clamp(count, 1, 3)};
}

void MappingConfig::validate() const {
    if (!(v_full != v_zero)) throw ConfigError("mapping: v_full must differ from v_zero");
    if (!(rate > 0.0)) throw ConfigError("mapping: control rate must be > 0");
    if (!(gesture_window > 0.0)) throw ConfigError("mapping: gesture window must be > 0");
    if (!(spike_guard >= 0.0)) throw ConfigError("mapping: spike guard must be >= 0");
}

double MappingConfig::bend_level(double v_dc) const {
    return std::clamp((v_dc - v_zero) / (v_full - v_zero), 0.0, 1.0);
}

std::vector<ControlCommand> map_control(const std::vector<Event>& events, const Trace& dc,
                                        const MappingConfig& mapping) {
    mapping.validate();
    std::vector<ControlCommand> cmds;
    std::vector<const Event*> plateaus;
    std::vector<double> spikes;
    for (const auto& e : events) {
        if (e.kind == EventKind::StaticPlateau) plateaus.push_back(&e);
    }
    for (const auto* p : plateaus) {
        const double step = 1.0 / mapping.rate;
        for (long k = 0;; ++k) {
            const double t = p->t_start + static_cast<double>(k) * step;
            if (t > p->t_end + 1e-12) break;
            cmds.push_back(ControlCommand::bend(t, mapping.bend_level(dc.at_time(t))));
        }
    }
    for (const auto& e : events) {
        if (e.kind != EventKind::DynamicSpike) continue;
        const bool owned = std::any_of(plateaus.begin(), plateaus.end(), [&](const Event* p) {
            return e.t_start >= p->t_start - mapping.spike_guard &&
                   e.t_start <= p->t_end + mapping.spike_guard;
        });
        if (!owned) spikes.push_back(e.t_start);
    }
    std::sort(spikes.begin(), spikes.end());
    for (std::size_t i = 0; i < spikes.size();) {
        const double close = spikes[i] + mapping.gesture_window;
        std::size_t j = i;
        while (j < spikes.size() && spikes[j] < close) ++j;
        cmds.push_back(ControlCommand::trigger(close, static_cast<int>(std::min<std::size_t>(j - i, 3))));
        i = j;
    }
    std::stable_sort(cmds.begin(), cmds.end(),
                     [](const ControlCommand& a, const ControlCommand& b) { return a.t < b.t; });
    return cmds;
}

void ChannelModel::validate() const {
    if (!(latency >= 0.0)) throw ConfigError("channel: latency must be >= 0");
    if (!(drop_probability >= 0.0 && drop_probability < 1.0)) {
        throw ConfigError("channel: drop probability must be in [0, 1)");
    }
}

std::vector<ControlCommand> transmit(const std::vector<ControlCommand>& cmds,
                                     const ChannelModel& ch) {
    ch.validate();
    std::mt19937_64 rng(ch.seed);
    std::bernoulli_distribution drop(ch.drop_probability);
    std::vector<ControlCommand> out;
    out.reserve(cmds.size());
    for (const auto& c : cmds) {
        if (drop(rng)) continue;
        ControlCommand d = c;
        d.t += ch.latency;
        out.push_back(d);
    }
    return out;
}

std::array<double, kFingers> gesture_pose(int gesture) {
    std::array<double, kFingers> pose;
    pose.fill(kMaxFingerAngle);
    const int n = std::clamp(gesture, 1, 3);
    for (int f = 1; f <= n; ++f) pose[static_cast<std::size_t>(f)] = 0.0;
    return pose;
}

void ActuatorConfig::validate() const {
    if (!(tau >= 0.0)) throw ConfigError("actuator: tau must be >= 0");
    if (!(sample_rate > 0.0)) throw ConfigError("actuator: sample rate must be > 0");
    if (!(settle >= 0.0)) throw ConfigError("actuator: settle time must be >= 0");
}

std::vector<HandSample> actuate(const std::vector<ControlCommand>& unsorted,
                                const HandState& initial, const ActuatorConfig& cfg) {
    cfg.validate();
    std::vector<ControlCommand> cmds = unsorted;
    std::stable_sort(cmds.begin(), cmds.end(),
                     [](const ControlCommand& a, const ControlCommand& b) { return a.t < b.t; });
    std::vector<HandSample> out;
    HandState state = initial;
    for (double& a : state.finger_angles) a = std::clamp(a, 0.0, kMaxFingerAngle);
    auto closed = [](const HandState& s) {
        return std::all_of(s.finger_angles.begin(), s.finger_angles.end(),
                           [](double a) { return a >= 0.8 * kMaxFingerAngle; });
    };
    state.grasp_closed = closed(state);
    if (cmds.empty()) {
        out.push_back({0.0, state});
        return out;
    }

    const double dt = 1.0 / cfg.sample_rate;
    const double gain = cfg.tau > 0.0 ? -std::expm1(-dt / cfg.tau) : 1.0;
    const double t_begin = cmds.front().t;
    const double t_stop = cmds.back().t + cfg.settle;
    std::array<double, kFingers> target = state.finger_angles;
    std::size_t next = 0;
    for (long k = 0;; ++k) {
        const double t = t_begin + static_cast<double>(k) * dt;
        if (t > t_stop + 1e-12) break;
        for (; next < cmds.size() && cmds[next].t <= t + 1e-12; ++next) {
            const auto& c = cmds[next];
            if (c.kind == CommandKind::Bend) {
                target.fill(std::clamp(c.level, 0.0, 1.0) * kMaxFingerAngle);
            } else {
                target = gesture_pose(c.gesture);
            }
        }
        if (k > 0 || cfg.tau == 0.0) {
            for (int f = 0; f < kFingers; ++f) {
                auto& a = state.finger_angles[static_cast<std::size_t>(f)];
                a = std::clamp(a + (target[static_cast<std::size_t>(f)] - a) * gain, 0.0,
                               kMaxFingerAngle);
            }
        }
        state.grasp_closed = closed(state);
        out.push_back({t, state});
    }
    return out;
}

}  // namespace isd
