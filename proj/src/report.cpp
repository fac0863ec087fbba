#include "isd/report.hpp"

#include "isd/errors.hpp"
#include "isd/trace_io.hpp"

namespace isd {

namespace {

Json sensitivity_rows(const std::vector<SensitivityRow>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) {
        out.push_back({{"p_lo_pa", r.p_lo},
                       {"p_hi_pa", r.p_hi},
                       {"v_per_pa", r.sensitivity},
                       {"v_per_kpa", r.sensitivity * 1000.0}});
    }
    return out;
}

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <typename T>
T as(const Json& j, const char* key) {
    try {
        return member(j, key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

Json fit_to_json(const PiecewiseFit& fit) {
    Json kpa = Json::array();
    for (double s : fit.slopes) kpa.push_back(s * 1000.0);
    return {{"model", "piecewise"},
            {"segments", fit.segments()},
            {"breakpoints_pa", fit.breakpoints},
            {"slopes_v_per_pa", fit.slopes},
            {"slopes_v_per_kpa", kpa},
            {"intercepts_v", fit.intercepts},
            {"rmse_v", fit.rmse},
            {"sse_v2", fit.sse},
            {"p_min_pa", fit.p_min},
            {"p_max_pa", fit.p_max},
            {"sensitivity", sensitivity_rows(sensitivity_report(fit))}};
}

Json fit_to_json(const ExpFit& fit, std::span<const double> report_pressures) {
    return {{"model", "exponential"},
            {"v_max_v", fit.v_max},
            {"k_per_pa", fit.k},
            {"rmse_v", fit.rmse},
            {"k_at_search_bound", fit.at_bound},
            {"sensitivity", sensitivity_rows(sensitivity_report(fit, report_pressures))}};
}

PiecewiseFit piecewise_from_json(const Json& j) {
    if (as<std::string>(j, "model") != "piecewise") {
        throw ParseError("expected a piecewise fit");
    }
    PiecewiseFit fit;
    fit.breakpoints = as<std::vector<double>>(j, "breakpoints_pa");
    fit.slopes = as<std::vector<double>>(j, "slopes_v_per_pa");
    fit.intercepts = as<std::vector<double>>(j, "intercepts_v");
    fit.rmse = as<double>(j, "rmse_v");
    fit.sse = as<double>(j, "sse_v2");
    fit.p_min = as<double>(j, "p_min_pa");
    fit.p_max = as<double>(j, "p_max_pa");
    try {
        fit.validate();
    } catch (const std::exception& e) {
        throw ParseError(std::string("inconsistent fit: ") + e.what());
    }
    return fit;
}

Json events_to_json(const std::vector<Event>& events) {
    Json arr = Json::array();
    for (const auto& e : events) {
        arr.push_back({{"kind", e.kind == EventKind::StaticPlateau ? "static_plateau" : "dynamic_spike"},
                       {"t_start_s", e.t_start},
                       {"t_end_s", e.t_end},
                       {"amplitude_v", e.amplitude},
                       {"polarity", e.polarity},
                       {"bipolar", e.bipolar}});
    }
    return {{"events", arr}};
}

std::vector<Event> events_from_json(const Json& j) {
    const Json& arr = member(j, "events");
    if (!arr.is_array()) throw ParseError("'events' must be an array");
    std::vector<Event> out;
    for (const auto& item : arr) {
        Event e;
        const auto kind = as<std::string>(item, "kind");
        if (kind == "static_plateau") e.kind = EventKind::StaticPlateau;
        else if (kind == "dynamic_spike") e.kind = EventKind::DynamicSpike;
        else throw ParseError("unknown event kind '" + kind + "'");
        e.t_start = as<double>(item, "t_start_s");
        e.t_end = as<double>(item, "t_end_s");
        e.amplitude = as<double>(item, "amplitude_v");
        e.polarity = as<int>(item, "polarity");
        e.bipolar = as<bool>(item, "bipolar");
        out.push_back(e);
    }
    return out;
}

std::string format_command_log(const std::vector<ControlCommand>& cmds) {
    std::string out;
    for (const auto& c : cmds) {
        Json line = {{"t", c.t}, {"kind", c.kind == CommandKind::Bend ? "bend" : "trigger"}};
        if (c.kind == CommandKind::Bend) line["value"] = c.level;
        else line["value"] = c.gesture;
        out += line.dump() + "\n";
    }
    return out;
}

std::vector<ControlCommand> parse_command_log(std::string_view text) {
    std::vector<ControlCommand> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            const Json j = parse_json(line);
            const auto kind = as<std::string>(j, "kind");
            const double t = as<double>(j, "t");
            if (kind == "bend") out.push_back(ControlCommand::bend(t, as<double>(j, "value")));
            else if (kind == "trigger") out.push_back(ControlCommand::trigger(t, as<int>(j, "value")));
            else throw ParseError("unknown command kind '" + kind + "'");
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return out;
}

std::string format_hand_trajectory(const std::vector<HandSample>& traj) {
    std::string out = "time_s,thumb_deg,index_deg,middle_deg,ring_deg,little_deg,grasp_closed\n";
    for (const auto& s : traj) {
        out += format_number(s.t);
        for (double a : s.state.finger_angles) out += "," + format_number(a);
        out += s.state.grasp_closed ? ",1\n" : ",0\n";
    }
    return out;
}

Json run_metadata(const Config& cfg) {
    return {{"config_hash", cfg.hash()}, {"seed", cfg.seed()}, {"tool_version", kToolVersion}};
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace isd
