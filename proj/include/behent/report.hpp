#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "behent/driver.hpp"
#include "behent/session.hpp"

namespace behent {

struct SegmentStats {
  std::string label;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  ///< population
};

/// Descriptive statistics of total entropy per workload segment. A row
/// belongs to the segment whose (start, end] contains its t_ms, measured
/// from `origin_ms`.
std::vector<SegmentStats> segment_statistics(const std::vector<TraceRow>& rows,
                                             const std::vector<WorkloadSegment>& segments,
                                             std::int64_t origin_ms = 0);

/// Segments as columns, Average / Std. deviation / Batches as rows.
void print_table(std::ostream& out, const std::vector<SegmentStats>& stats);

/// "label:seconds[:sigma[:speed]]" comma separated.
std::vector<WorkloadSegment> parse_schedule(const std::string& text);

}  // namespace behent
