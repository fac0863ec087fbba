#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "isd/charfit.hpp"
#include "isd/conditioning.hpp"
#include "isd/control.hpp"
#include "isd/excitation.hpp"
#include "isd/transducer.hpp"

namespace isd {

enum class ValueType { Number, Integer, Boolean, Text, NumberList };

struct ConfigKey {
    std::string_view name;           // dotted, e.g. "sensor.eps_r"
    ValueType type;
    std::string_view default_value;
    std::string_view description;
    std::vector<std::string_view> choices = {};  // Text keys with a closed set
};

// Flat `section.key = value` document; '#' starts a comment. Every key has
// a default, unknown keys are rejected. Values stay as text until a typed
// accessor or builder reads them.
class Config {
public:
    Config();

    static const std::vector<ConfigKey>& schema();
    static Config parse(std::string_view text);
    static Config load(const std::filesystem::path& path);

    // Throws ConfigError for unknown keys or values of the wrong type.
    void set(std::string_view key, std::string_view value);
    const std::string& text(std::string_view key) const;
    double number(std::string_view key) const;
    std::int64_t integer(std::string_view key) const;
    bool boolean(std::string_view key) const;
    std::vector<double> numbers(std::string_view key) const;

    // Sorted `key = value` lines over every key, defaults included.
    std::string canonical() const;
    // SHA-256 hex of canonical().
    std::string hash() const;

    std::uint64_t seed() const;
    SensorParams sensor() const;  // static.curve is resolved by the caller
    CEState charge_excitation() const;
    ResponseDynamics dynamics() const;
    ExcitationSpec excitation() const;
    ConditioningNetwork conditioning() const;
    HarvestConfig harvest() const;
    ClassifierConfig classifier() const;
    MappingConfig mapping() const;
    ChannelModel channel() const;
    ActuatorConfig actuator() const;
    DetectionGrid detection_grid() const;

    // Builds and validates every section.
    void validate() const;

private:
    std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace isd
