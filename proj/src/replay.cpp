#include "behent/replay.hpp"

#include <optional>

#include "behent/trace.hpp"

namespace behent {

ReplayResult replay(const TelemetryLog& log, const SessionConfig& config, const Baseline& baseline,
                    std::ostream* trace) {
  Session session(config, baseline);
  std::optional<TraceWriter> writer;
  if (trace) {
    writer.emplace(*trace, config);
    session.set_row_sink([&writer](const TraceRow& r) { writer->write(r); });
  }
  ReplayResult result;
  for (const auto& s : log) {
    auto events = session.ingest(s);
    result.events.insert(result.events.end(), events.begin(), events.end());
  }
  auto tail = session.finish();
  result.events.insert(result.events.end(), tail.begin(), tail.end());
  result.rows = session.rows();
  return result;
}

}  // namespace behent
