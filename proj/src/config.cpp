#include "isd/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "isd/errors.hpp"

namespace isd {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

bool parse_int(std::string_view s, std::int64_t& out) {
    s = trim(s);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (trim(s).empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

const ConfigKey* find_key(std::string_view name) {
    for (const auto& k : Config::schema()) {
        if (k.name == name) return &k;
    }
    return nullptr;
}

void check_value(const ConfigKey& key, std::string_view value) {
    const std::string where = "config key '" + std::string(key.name) + "': ";
    switch (key.type) {
        case ValueType::Number: {
            double d;
            if (!parse_double(value, d) || std::isnan(d)) {
                throw ConfigError(where + "expected a number, got '" + std::string(value) + "'");
            }
            break;
        }
        case ValueType::Integer: {
            std::int64_t i;
            if (!parse_int(value, i)) {
                throw ConfigError(where + "expected an integer, got '" + std::string(value) + "'");
            }
            break;
        }
        case ValueType::Boolean:
            if (value != "true" && value != "false") {
                throw ConfigError(where + "expected true or false");
            }
            break;
        case ValueType::NumberList:
            for (auto item : split(value, ',')) {
                double d;
                if (!parse_double(item, d) || std::isnan(d)) {
                    throw ConfigError(where + "bad list item '" + std::string(item) + "'");
                }
            }
            break;
        case ValueType::Text:
            if (!key.choices.empty() &&
                std::find(key.choices.begin(), key.choices.end(), value) == key.choices.end()) {
                std::string allowed;
                for (auto c : key.choices) allowed += (allowed.empty() ? "" : "|") + std::string(c);
                throw ConfigError(where + "expected one of " + allowed);
            }
            break;
    }
}

}  // namespace

const std::vector<ConfigKey>& Config::schema() {
    using V = ValueType;
    static const std::vector<ConfigKey> keys = {
        {"run.seed", V::Integer, "42", "base seed; ISD_SEED overrides"},

        {"sensor.area_m2", V::Number, "1.6e-3", "initial contact area A0"},
        {"sensor.thickness_m", V::Number, "5e-4", "ePTFE thickness d"},
        {"sensor.gap_m", V::Number, "1e-3", "preset separation gap x"},
        {"sensor.eps_r", V::Number, "2.0", "relative permittivity of ePTFE"},
        {"sensor.permittivity", V::Text, "corrected", "effective permittivity form",
         {"corrected", "repeated_ratio"}},

        {"static.charge_c", V::Number, "1e-9", "transferred charge Q"},
        {"static.alpha_m2_per_pa", V::Number, "0", "area expansion coefficient"},
        {"static.beta_m_per_pa", V::Number, "0", "thickness compression coefficient"},
        {"static.curve", V::Text, "", "fit JSON used as the DC target (empty: electrostatic model)"},

        {"dynamic.sigma0_c_per_m2", V::Number, "1e-5", "maximum surface charge density"},
        {"dynamic.m_per_pa", V::Number, "5e-4", "charge-density saturation constant"},
        {"dynamic.v_max_v", V::Number, "163.6", "saturation voltage"},
        {"dynamic.k_per_pa", V::Number, "4.2e-4", "empirical sensitivity constant"},
        {"dynamic.source", V::Text, "empirical", "AC peak model",
         {"empirical", "charge_density"}},

        {"gradient.enabled", V::Boolean, "false", "use the stacked gradient structure"},
        {"gradient.layer_areas_m2", V::NumberList, "4.05e-4,8.1e-4,1.215e-3,1.62e-3,2.025e-3",
         "layer footprints, top to bottom"},
        {"gradient.engage_pressures_pa", V::NumberList, "6,904.5,1803,2701.5,3600",
         "full-contact pressure of each layer"},
        {"gradient.layer_thickness_m", V::Number, "2e-3", "sponge layer thickness"},
        {"gradient.smoothing_fraction", V::Number, "0.05", "ramp width as a fraction of each threshold"},

        {"ce.mode", V::Text, "off", "charge excitation", {"off", "pce", "rce"}},
        {"ce.static_gain", V::Number, "25.4", "DC gain when excited"},
        {"ce.dynamic_gain", V::Number, "15.2", "AC gain when excited"},

        {"dynamics.tau_rise_s", V::Number, "0.03778", "DC loading time constant"},
        {"dynamics.tau_fall_s", V::Number, "0.01957", "DC recovery time constant"},
        {"dynamics.noise_rms_v", V::Number, "0", "additive Gaussian noise"},
        {"dynamics.min_pulse_width_s", V::Number, "0.01", "narrowest AC pulse"},

        {"excitation.kind", V::Text, "sine", "pressure waveform",
         {"square", "sine", "weight_steps", "tap_train", "constant"}},
        {"excitation.amplitude_pa", V::Number, "5000", "peak pressure"},
        {"excitation.frequency_hz", V::Number, "2", "square/sine/tap frequency"},
        {"excitation.duty", V::Number, "0.5", "square-wave pressed fraction"},
        {"excitation.tap_width_s", V::Number, "0.03", "raised-cosine tap length"},
        {"excitation.steps", V::Text, "", "weight schedule mass_kg:duration_s,..."},
        {"excitation.device_area_m2", V::Number, "1.6e-3", "area loaded by weights"},
        {"excitation.duration_s", V::Number, "2", "trace length"},
        {"excitation.sample_rate_hz", V::Number, "1000", "sample rate"},
        {"excitation.noise_pa", V::Number, "0", "additive pressure noise"},

        {"conditioning.series_r_ohm", V::Number, "5e7", "series resistance"},
        {"conditioning.parallel_c_f", V::Number, "0", "parallel capacitance"},
        {"conditioning.sensor_c_f", V::Number, "1e-10", "sensor internal capacitance"},
        {"conditioning.pulse_threshold_fraction", V::Number, "0.05", "pulse detection level"},

        {"harvest.storage_c_f", V::Number, "2.2e-6", "storage capacitor"},
        {"harvest.pulses_per_cycle", V::Integer, "2", "rectified pulses per cycle (1 or 2)"},
        {"harvest.charge_per_pulse_c", V::Number, "4.31e-8", "charge per pulse"},
        {"harvest.frequency_hz", V::Number, "6", "excitation frequency"},
        {"harvest.duration_s", V::Number, "60", "charging time"},
        {"harvest.diode_drop_v", V::Number, "0", "forward drop per diode"},
        {"harvest.source_peak_v", V::Number, "inf", "open-circuit source peak"},
        {"harvest.sample_rate_hz", V::Number, "10", "output sample rate"},

        {"fit.segments", V::Integer, "3", "piecewise segments (1-4)"},
        {"fit.model", V::Text, "piecewise", "fit family", {"piecewise", "exponential"}},
        {"fit.report_pressures_pa", V::NumberList, "0", "exponential sensitivity rows"},

        {"classify.dc_threshold_v", V::Number, "0.3", "plateau threshold on |dc|"},
        {"classify.ac_threshold_v", V::Number, "1.0", "spike threshold on |ac|"},
        {"classify.hold_s", V::Number, "0.25", "minimum plateau duration"},
        {"classify.release_fraction", V::Number, "0.5", "spike hysteresis"},
        {"classify.pair_factor", V::Number, "1.5", "bipolar pairing window in pulse widths"},

        {"control.v_zero_v", V::Number, "-0.152", "DC voltage mapped to Bend 0"},
        {"control.v_full_v", V::Number, "4.014", "DC voltage mapped to Bend 1"},
        {"control.rate_hz", V::Number, "50", "Bend emission rate"},
        {"control.gesture_window_s", V::Number, "1.0", "spike counting window"},
        {"control.spike_guard_s", V::Number, "0.2", "spikes this close to a plateau are ignored"},

        {"channel.latency_s", V::Number, "0", "link latency"},
        {"channel.drop_probability", V::Number, "0", "independent drop probability"},

        {"actuator.tau_s", V::Number, "0.1", "finger lag"},
        {"actuator.sample_rate_hz", V::Number, "50", "trajectory sample rate"},
        {"actuator.settle_s", V::Number, "0.5", "time simulated after the last command"},

        {"detection.criterion", V::Number, "3", "SNR criterion"},
        {"detection.grid_min_pa", V::Number, "0.01", "grid start"},
        {"detection.grid_max_pa", V::Number, "1e5", "grid end"},
        {"detection.points_per_decade", V::Integer, "200", "grid density"},
    };
    return keys;
}

Config::Config() {
    for (const auto& k : schema()) values_.emplace(std::string(k.name), std::string(k.default_value));
}

Config Config::parse(std::string_view text) {
    Config cfg;
    std::vector<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? end : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        seen.push_back(key);
        try {
            cfg.set(key, trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void Config::set(std::string_view key, std::string_view value) {
    const ConfigKey* k = find_key(key);
    if (!k) throw ConfigError("unknown config key '" + std::string(key) + "'");
    value = trim(value);
    check_value(*k, value);
    values_.find(key)->second = std::string(value);
}

const std::string& Config::text(std::string_view key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
    return it->second;
}

double Config::number(std::string_view key) const {
    double d = 0.0;
    parse_double(text(key), d);
    return d;
}

std::int64_t Config::integer(std::string_view key) const {
    std::int64_t i = 0;
    parse_int(text(key), i);
    return i;
}

bool Config::boolean(std::string_view key) const { return text(key) == "true"; }

std::vector<double> Config::numbers(std::string_view key) const {
    std::vector<double> out;
    for (auto item : split(text(key), ',')) {
        double d = 0.0;
        parse_double(item, d);
        out.push_back(d);
    }
    return out;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

std::string Config::hash() const {
    const std::string data = canonical();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::uint64_t Config::seed() const { return static_cast<std::uint64_t>(integer("run.seed")); }

SensorParams Config::sensor() const {
    SensorParams p;
    Geometry g;
    g.area0 = number("sensor.area_m2");
    g.thickness = number("sensor.thickness_m");
    g.gap = number("sensor.gap_m");
    g.eps_r = number("sensor.eps_r");
    p.static_model.geometry = g;
    p.static_model.charge = number("static.charge_c");
    p.static_model.alpha = number("static.alpha_m2_per_pa");
    p.static_model.beta = number("static.beta_m_per_pa");
    p.dynamic_model.geometry = g;
    p.dynamic_model.sigma0 = number("dynamic.sigma0_c_per_m2");
    p.dynamic_model.density_rate = number("dynamic.m_per_pa");
    p.dynamic_model.v_max = number("dynamic.v_max_v");
    p.dynamic_model.k = number("dynamic.k_per_pa");
    p.dynamic_source = text("dynamic.source") == "charge_density" ? DynamicSource::ChargeDensity
                                                                  : DynamicSource::Empirical;
    p.permittivity = text("sensor.permittivity") == "repeated_ratio"
                         ? PermittivityMode::RepeatedRatio
                         : PermittivityMode::Corrected;
    if (boolean("gradient.enabled")) {
        const auto areas = numbers("gradient.layer_areas_m2");
        const auto thresholds = numbers("gradient.engage_pressures_pa");
        if (areas.size() != thresholds.size()) {
            throw ConfigError("gradient: layer_areas_m2 and engage_pressures_pa differ in length");
        }
        GradientStack stack;
        for (std::size_t i = 0; i < areas.size(); ++i) stack.layers.push_back({areas[i], thresholds[i]});
        stack.layer_thickness = number("gradient.layer_thickness_m");
        stack.smoothing_fraction = number("gradient.smoothing_fraction");
        p.gradient = stack;
    }
    return p;
}

CEState Config::charge_excitation() const {
    const std::string& mode = text("ce.mode");
    if (mode == "off") return CEState::off();
    const double s = number("ce.static_gain");
    const double d = number("ce.dynamic_gain");
    return mode == "pce" ? CEState::pce(s, d) : CEState::rce(s, d);
}

ResponseDynamics Config::dynamics() const {
    ResponseDynamics d;
    d.tau_rise = number("dynamics.tau_rise_s");
    d.tau_fall = number("dynamics.tau_fall_s");
    d.noise_rms = number("dynamics.noise_rms_v");
    d.min_pulse_width = number("dynamics.min_pulse_width_s");
    d.seed = seed() + 1;
    return d;
}

ExcitationSpec Config::excitation() const {
    ExcitationSpec s;
    const std::string& kind = text("excitation.kind");
    if (kind == "square") s.kind = ExcitationKind::Square;
    else if (kind == "sine") s.kind = ExcitationKind::Sine;
    else if (kind == "weight_steps") s.kind = ExcitationKind::WeightSteps;
    else if (kind == "tap_train") s.kind = ExcitationKind::TapTrain;
    else s.kind = ExcitationKind::Constant;
    s.amplitude = number("excitation.amplitude_pa");
    s.frequency = number("excitation.frequency_hz");
    s.duty = number("excitation.duty");
    s.tap_width = number("excitation.tap_width_s");
    for (auto item : split(text("excitation.steps"), ',')) {
        const auto colon = item.find(':');
        WeightStep step{};
        if (colon == std::string_view::npos || !parse_double(item.substr(0, colon), step.mass) ||
            !parse_double(item.substr(colon + 1), step.duration)) {
            throw ConfigError("excitation.steps: expected mass_kg:duration_s, got '" +
                              std::string(item) + "'");
        }
        s.steps.push_back(step);
    }
    s.device_area = number("excitation.device_area_m2");
    s.duration = number("excitation.duration_s");
    s.sample_rate = number("excitation.sample_rate_hz");
    s.noise_rms = number("excitation.noise_pa");
    s.seed = seed();
    return s;
}

ConditioningNetwork Config::conditioning() const {
    ConditioningNetwork n;
    n.series_r = number("conditioning.series_r_ohm");
    n.parallel_c = number("conditioning.parallel_c_f");
    n.sensor_c_internal = number("conditioning.sensor_c_f");
    n.pulse_threshold_fraction = number("conditioning.pulse_threshold_fraction");
    return n;
}

HarvestConfig Config::harvest() const {
    HarvestConfig h;
    h.storage_c = number("harvest.storage_c_f");
    h.pulses_per_cycle = static_cast<int>(integer("harvest.pulses_per_cycle"));
    h.charge_per_pulse = number("harvest.charge_per_pulse_c");
    h.frequency = number("harvest.frequency_hz");
    h.duration = number("harvest.duration_s");
    h.diode_drop = number("harvest.diode_drop_v");
    h.source_peak = number("harvest.source_peak_v");
    h.sample_rate = number("harvest.sample_rate_hz");
    return h;
}

ClassifierConfig Config::classifier() const {
    ClassifierConfig c;
    c.dc_threshold = number("classify.dc_threshold_v");
    c.ac_threshold = number("classify.ac_threshold_v");
    c.hold = number("classify.hold_s");
    c.release_fraction = number("classify.release_fraction");
    c.pair_factor = number("classify.pair_factor");
    return c;
}

MappingConfig Config::mapping() const {
    MappingConfig m;
    m.v_zero = number("control.v_zero_v");
    m.v_full = number("control.v_full_v");
    m.rate = number("control.rate_hz");
    m.gesture_window = number("control.gesture_window_s");
    m.spike_guard = number("control.spike_guard_s");
    return m;
}

ChannelModel Config::channel() const {
    ChannelModel c;
    c.latency = number("channel.latency_s");
    c.drop_probability = number("channel.drop_probability");
    c.seed = seed() + 2;
    return c;
}

ActuatorConfig Config::actuator() const {
    ActuatorConfig a;
    a.tau = number("actuator.tau_s");
    a.sample_rate = number("actuator.sample_rate_hz");
    a.settle = number("actuator.settle_s");
    return a;
}

DetectionGrid Config::detection_grid() const {
    DetectionGrid g;
    g.min_pa = number("detection.grid_min_pa");
    g.max_pa = number("detection.grid_max_pa");
    g.points_per_decade = static_cast<int>(integer("detection.points_per_decade"));
    return g;
}

void Config::validate() const {
    sensor().validate();
    charge_excitation().validate();
    dynamics().validate();
    excitation().validate();
    conditioning().validate();
    harvest().validate();
    classifier().validate();
    mapping().validate();
    channel().validate();
    actuator().validate();
    const auto segments = integer("fit.segments");
    if (segments < 1 || segments > 4) throw ConfigError("fit.segments must be in [1, 4]");
    const auto g = detection_grid();
    if (!(g.min_pa > 0.0 && g.max_pa > g.min_pa && g.points_per_decade > 0)) {
        throw ConfigError("detection grid must satisfy 0 < min < max, points > 0");
    }
    if (!(number("detection.criterion") > 0.0)) throw ConfigError("detection.criterion must be > 0");
}

}  // namespace isd
