#include "isd/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "isd/errors.hpp"

namespace isd {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_field(std::string_view s, std::size_t line) {
    s = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("bad number '" + std::string(s) + "'", line);
    }
    if (!std::isfinite(v)) throw ParseError("non-finite value", line);
    return v;
}

// Splits into lines, numbering from 1, skipping blank ones.
template <typename F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t pos = 0;
    std::size_t line = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line;
        const auto row = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (!row.empty()) f(row, line);
    }
}

std::pair<double, double> parse_pair(std::string_view row, std::size_t line) {
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
        throw ParseError("expected 2 columns", line);
    }
    return {parse_field(row.substr(0, comma), line), parse_field(row.substr(comma + 1), line)};
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out.flush()) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename onto '" + path.string() + "'");
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_trace(const Trace& trace) {
    std::string out = "time_s,";
    out += channel_column(trace.channel);
    out += '\n';
    out.reserve(trace.size() * 40);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += format_number(trace.time(i));
        out += ',';
        out += format_number(trace.samples[i]);
        out += '\n';
    }
    return out;
}

Trace parse_trace(std::string_view text, std::optional<Channel> expected) {
    Trace trace;
    std::vector<double> times;
    std::vector<std::size_t> lines;
    bool header = true;
    for_each_line(text, [&](std::string_view row, std::size_t line) {
        if (header) {
            header = false;
            const auto comma = row.find(',');
            const auto first = trim(row.substr(0, comma));
            const auto second = comma == std::string_view::npos ? std::string_view{}
                                                                : trim(row.substr(comma + 1));
            if (first != "time_s") throw ParseError("header must start with time_s", line);
            if (expected && second != channel_column(*expected)) {
                throw ParseError("header column '" + std::string(second) + "', expected '" +
                                     std::string(channel_column(*expected)) + "'",
                                 line);
            }
            try {
                trace.channel = channel_from_column(second);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), line);
            }
            return;
        }
        const auto [t, v] = parse_pair(row, line);
        if (!times.empty() && !(t > times.back())) throw ParseError("time must increase", line);
        times.push_back(t);
        lines.push_back(line);
        trace.samples.push_back(v);
    });
    if (header) throw ParseError("empty trace file", 1);
    if (times.size() < 2) throw ParseError("trace needs at least 2 rows", 2);
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        const double ideal = times.front() + static_cast<double>(i) * dt;
        // Allow for the decimal rounding of large time stamps.
        const double slack = 1e-9 * dt + 4.0 * std::abs(times[i]) * 2.220446049250313e-16;
        if (std::abs(times[i] - ideal) > slack) throw ParseError("non-uniform sampling", lines[i]);
    }
    trace.t0 = times.front();
    trace.dt = dt;
    return trace;
}

void write_trace(const std::filesystem::path& path, const Trace& trace) {
    trace.validate();
    write_file_atomic(path, format_trace(trace));
}

Trace read_trace(const std::filesystem::path& path, std::optional<Channel> expected) {
    return parse_trace(read_file(path), expected);
}

std::string format_pv(const PVSamples& data) {
    std::string out = "pressure_kpa,voltage_v\n";
    for (const auto& p : data.points) {
        out += format_number(p.pressure / 1000.0) + "," + format_number(p.voltage) + "\n";
    }
    return out;
}

PVSamples parse_pv(std::string_view text) {
    PVSamples data;
    bool header = true;
    for_each_line(text, [&](std::string_view row, std::size_t line) {
        if (header) {
            header = false;
            std::string compact;
            for (char c : row) {
                if (c != ' ' && c != '\t') compact += c;
            }
            if (compact != "pressure_kpa,voltage_v") {
                throw ParseError("header must be pressure_kpa,voltage_v", line);
            }
            return;
        }
        const auto [p, v] = parse_pair(row, line);
        data.points.push_back({p * 1000.0, v});
    });
    if (header) throw ParseError("empty PV file", 1);
    return data;
}

PVSamples read_pv(const std::filesystem::path& path) {
    return parse_pv(read_file(path));
}

}  // namespace isd
