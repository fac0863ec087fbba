#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "isd/trace.hpp"

namespace isd {

enum class EventKind { StaticPlateau, DynamicSpike };

struct Event {
    EventKind kind = EventKind::StaticPlateau;
    double t_start = 0.0;    // s
    double t_end = 0.0;      // s
    double amplitude = 0.0;  // V: plateau mean, or spike peak magnitude
    int polarity = 1;        // sign of the (first) spike; plateau sign for plateaus
    bool bipolar = false;    // spike collapsed from a +/- pair
};

struct ClassifierConfig {
    double dc_threshold = 0.3;     // V
    double ac_threshold = 1.0;     // V
    double hold = 0.25;            // s, minimum plateau duration
    double release_fraction = 0.5; // spike ends below release_fraction * ac_threshold
    double pair_factor = 1.5;      // opposite spike within this many pulse widths pairs up

    void validate() const;
};

// Plateaus: runs with |dc| > dc_threshold lasting >= hold. Spikes: AC
// excursions beyond ac_threshold with hysteresis; an opposite-sign
// excursion starting within pair_factor widths of the previous one's end is
// merged into it. Result is sorted by start time. Each channel is processed
// on its own time base.
std::vector<Event> classify(const Trace& dc, const Trace& ac, const ClassifierConfig& cfg);

enum class CommandKind { Bend, Trigger };

struct ControlCommand {
    double t = 0.0;
    CommandKind kind = CommandKind::Bend;
    double level = 0.0;  // Bend, in [0, 1]
    int gesture = 0;     // Trigger, in {1, 2, 3}

    static ControlCommand bend(double t, double level);
    static ControlCommand trigger(double t, int count);
};

struct MappingConfig {
    double v_zero = -0.152;      // V mapped to Bend(0)
    double v_full = 4.014;       // V mapped to Bend(1)
    double rate = 50.0;          // Hz, Bend emission during plateaus
    double gesture_window = 1.0; // s
    // Spikes within this margin of a plateau belong to its press/release.
    double spike_guard = 0.2;    // s

    void validate() const;
    double bend_level(double v_dc) const;
};

// Bend commands at `rate` during each plateau, level from the DC trace;
// spikes outside plateaus are counted per gesture window and emitted as
// Trigger(min(count, 3)) when the window closes. Sorted by time.
std::vector<ControlCommand> map_control(const std::vector<Event>& events, const Trace& dc,
                                        const MappingConfig& mapping);

struct ChannelModel {
    double latency = 0.0;           // s
    double drop_probability = 0.0;  // [0, 1)
    std::uint64_t seed = 0;

    void validate() const;
};

// Delays every command by latency and drops each independently.
std::vector<ControlCommand> transmit(const std::vector<ControlCommand>& cmds,
                                     const ChannelModel& ch);

inline constexpr int kFingers = 5;  // thumb, index, middle, ring, little
inline constexpr double kMaxFingerAngle = 90.0;

struct HandState {
    std::array<double, kFingers> finger_angles{};  // degrees, 0 = extended
    bool grasp_closed = false;
};

struct HandSample {
    double t;
    HandState state;
};

// Gesture poses: n fingers extended starting from the index finger.
std::array<double, kFingers> gesture_pose(int gesture);

struct ActuatorConfig {
    double tau = 0.1;          // s, first-order lag; 0 snaps to target
    double sample_rate = 50.0; // Hz
    double settle = 0.5;       // s simulated past the last command

    void validate() const;
};

// Trajectory sampled from the first command time to last + settle.
std::vector<HandSample> actuate(const std::vector<ControlCommand>& cmds,
                                const HandState& initial, const ActuatorConfig& cfg = {});

}  // namespace isd
