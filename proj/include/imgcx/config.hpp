#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "imgcx/measures.hpp"

namespace imgcx {

enum class OutputFormat { Csv, Json };

/// Everything a run depends on. Defaults are the reference settings.
struct RunConfig {
    MeasureConfig measures;
    std::size_t workers = 1;
    std::filesystem::path cache_path;  ///< empty = no persistent cache
    OutputFormat format = OutputFormat::Csv;
    bool include_skew = false;  ///< let skew compete for the top-measure slot

    void validate() const;
};

/// Luminance weights applied to color sources at load time.
inline constexpr const char* kLuminanceConvention = "rec709(0.2126,0.7152,0.0722)/8bit";

/// Canonical text of every parameter that affects measure values, plus the
/// codec version and luminance convention.
std::string canonical_parameters(const MeasureConfig& config);

/// SHA-256 hex digest of canonical_parameters.
std::string parameter_fingerprint(const MeasureConfig& config);

/// Hex SHA-256 of a byte buffer.
std::string sha256_hex(std::span<const std::uint8_t> bytes);

/// Environment variable naming the default cache file.
inline constexpr const char* kCacheEnvVar = "IMGCX_CACHE";

/// RunConfig as a JSON object string (stable key order), embedded in reports.
std::string config_json(const RunConfig& config, int indent = 2);

}  // namespace imgcx
