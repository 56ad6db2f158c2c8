#pragma once

// Wire protocol: JSON text frames. Clients send {"type":"cmd",...}; the
// server answers with pose, entropy, indication, profile_update and
// rate_warning messages.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "behent/driver.hpp"
#include "behent/session.hpp"

namespace behent {

/// Parses a client frame. Throws FormatError (line 1) unless it is a valid cmd.
CommandSample parse_command(std::string_view frame);
nlohmann::json command_message(const CommandSample& s);

nlohmann::json pose_message(const Pose& p, std::int64_t t_ms);
nlohmann::json rate_warning_message(double rate_hz, std::int64_t t_ms);
nlohmann::json close_message(std::string_view reason);

/// entropy / indication / profile_update message for a session event.
nlohmann::json event_message(const SessionEvent& e);

}  // namespace behent
