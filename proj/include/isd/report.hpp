#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "isd/charfit.hpp"
#include "isd/config.hpp"
#include "isd/control.hpp"

namespace isd {

inline constexpr std::string_view kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// {"model": "piecewise", breakpoints_pa, slopes_v_per_pa, ...,
//  "sensitivity": [{p_lo_pa, p_hi_pa, v_per_pa, v_per_kpa}]}
Json fit_to_json(const PiecewiseFit& fit);
Json fit_to_json(const ExpFit& fit, std::span<const double> report_pressures);
// Accepts the piecewise form only; throws ParseError otherwise.
PiecewiseFit piecewise_from_json(const Json& j);

Json events_to_json(const std::vector<Event>& events);
std::vector<Event> events_from_json(const Json& j);

// One {"t", "kind", "value"} object per line; value is the bend level or
// the gesture count.
std::string format_command_log(const std::vector<ControlCommand>& cmds);
std::vector<ControlCommand> parse_command_log(std::string_view text);

// time_s, one *_deg column per finger, grasp_closed.
std::string format_hand_trajectory(const std::vector<HandSample>& traj);

// {config_hash, seed, tool_version}
Json run_metadata(const Config& cfg);

Json parse_json(std::string_view text);
std::string dump_json(const Json& j);

}  // namespace isd
