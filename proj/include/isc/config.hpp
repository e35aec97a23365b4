#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "isc/simulation.hpp"

namespace isc {

/// Parse or validation failure; line() is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);

    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/**
 * @brief Parse the flat `key = value` scenario format.
 *
 * Blank lines and text after `#` are ignored. Unspecified keys keep the
 * defaults of the selected scenario (ScenarioConfig::defaults). Matrix keys
 * take either two values (diagonal) or four values (row-major). Values may be
 * separated by spaces or commas.
 *
 * @param kind_override scenario kind chosen outside the file; a conflicting
 *        `scenario` key is an error.
 */
[[nodiscard]] ScenarioConfig parse_config(std::string_view text, std::optional<ScenarioKind> kind_override = {});

[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path,
                                         std::optional<ScenarioKind> kind_override = {});

/// Write every key so that parse_config(write_config(c)) == c.
void write_config(std::ostream& os, const ScenarioConfig& cfg);
[[nodiscard]] std::string write_config(const ScenarioConfig& cfg);

[[nodiscard]] std::string_view to_string(DriverKind kind);
[[nodiscard]] DriverKind driver_from_string(std::string_view name);

}  // namespace isc
