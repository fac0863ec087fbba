#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "isd/charfit.hpp"
#include "isd/trace.hpp"

namespace isd {

// Shortest decimal that round-trips the double exactly.
std::string format_number(double v);

// Writes `text` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view text);
std::string read_file(const std::filesystem::path& path);

// `time_s,<channel>` CSV. Times are written as t0 + i*dt.
std::string format_trace(const Trace& trace);
// Throws ParseError (with line number) for malformed rows, a header that
// does not match `expected`, fewer than two rows, or sampling that is not
// uniform to 1e-9 relative.
Trace parse_trace(std::string_view text, std::optional<Channel> expected = std::nullopt);

void write_trace(const std::filesystem::path& path, const Trace& trace);
Trace read_trace(const std::filesystem::path& path, std::optional<Channel> expected = std::nullopt);

// `pressure_kpa,voltage_v` CSV.
std::string format_pv(const PVSamples& data);
PVSamples parse_pv(std::string_view text);
PVSamples read_pv(const std::filesystem::path& path);

}  // namespace isd
