#pragma once

#include <iosfwd>
#include <vector>

#include "behent/baseline.hpp"
#include "behent/driver.hpp"
#include "behent/session.hpp"

namespace behent {

struct ReplayResult {
  std::vector<SessionEvent> events;
  std::vector<TraceRow> rows;
};

/// Runs `log` through a fresh session at simulated time. When `trace` is
/// given, the trace CSV is streamed to it exactly as a live session would.
ReplayResult replay(const TelemetryLog& log, const SessionConfig& config, const Baseline& baseline,
                    std::ostream* trace = nullptr);

}  // namespace behent
