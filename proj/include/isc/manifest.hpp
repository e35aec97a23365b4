#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace isc {

/// Lower-case hex SHA-256 of @p data.
[[nodiscard]] std::string sha256_hex(std::string_view data);
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
    std::string name;  //!< path relative to the output directory
    std::string sha256;
    std::size_t bytes = 0;
};

/// Inventory of one CLI invocation.
struct RunManifest {
    std::string config_path;  //!< empty when built-in defaults were used
    std::string output_dir;
    std::string scenario;
    std::string sweep_parameter;  //!< empty without a sweep
    std::vector<double> sweep_values;
    std::vector<ManifestEntry> files;

    void add(std::string name, std::string_view contents);
};

/// Text form; the header names the digest algorithm.
void write_manifest(std::ostream& os, const RunManifest& manifest);

}  // namespace isc
