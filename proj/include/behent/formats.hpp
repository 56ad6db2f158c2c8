#pragma once

// On-disk formats: JSON Lines telemetry logs, JSON driver profiles, and the
// number formatting shared by every text output.

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "behent/baseline.hpp"
#include "behent/driver.hpp"
#include "behent/session.hpp"

namespace behent {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kTelemetryFormat = "behent-telemetry";
inline constexpr const char* kProfileFormat = "behent-profile";

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Writes a header line followed by one {"t_ms","lin","ang"} object per record.
void write_telemetry(std::ostream& out, const TelemetryLog& log);
void write_telemetry(const std::filesystem::path& path, const TelemetryLog& log);

/// Accepts an optional header line. Throws FormatError naming the first
/// malformed or out-of-order line.
TelemetryLog read_telemetry(std::istream& in);
TelemetryLog read_telemetry(const std::filesystem::path& path);

nlohmann::json profile_to_json(const Baseline& b);
Baseline profile_from_json(const nlohmann::json& j);
void write_profile(const std::filesystem::path& path, const Baseline& b);
Baseline read_profile(const std::filesystem::path& path);

nlohmann::json to_json(const SessionConfig& c);

}  // namespace behent
