#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "behent/session.hpp"

namespace behent {

inline constexpr const char* kTraceColumns =
    "t_ms,hp_lin,hp_ang,total,wais_avg,indication,alpha_lin,alpha_ang,profile_revision";

/// Two header lines: "# behent-trace v1 <config json>" and the column names.
std::string trace_header(const SessionConfig& config);
std::string format_row(const TraceRow& row);

/// Streams rows as they are produced; flushes after each one.
class TraceWriter {
 public:
  TraceWriter(std::ostream& out, const SessionConfig& config);
  void write(const TraceRow& row);

 private:
  std::ostream& out_;
};

struct TraceFile {
  nlohmann::json config;
  std::vector<TraceRow> rows;
};

/// Throws FormatError on a malformed line.
TraceFile read_trace(std::istream& in);
TraceFile read_trace(const std::filesystem::path& path);

}  // namespace behent
