#include "behent/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "behent/dpu.hpp"
#include "behent/errors.hpp"

namespace behent {

std::vector<SegmentStats> segment_statistics(const std::vector<TraceRow>& rows,
                                             const std::vector<WorkloadSegment>& segments,
                                             std::int64_t origin_ms) {
  std::vector<SegmentStats> out;
  std::int64_t start = origin_ms;
  for (const auto& seg : segments) {
    const auto end = start + static_cast<std::int64_t>(std::llround(seg.duration_s * 1000.0));
    std::vector<double> totals;
    for (const auto& r : rows) {
      if (r.computation.t_ms > start && r.computation.t_ms <= end) totals.push_back(r.computation.total);
    }
    out.push_back({seg.label, start, end, totals.size(), mean(totals), population_std(totals)});
    start = end;
  }
  return out;
}

void print_table(std::ostream& out, const std::vector<SegmentStats>& stats) {
  constexpr int kLabel = 16;
  constexpr int kCell = 12;
  out << std::left << std::setw(kLabel) << "";
  for (const auto& s : stats) out << std::right << std::setw(kCell) << s.label;
  out << '\n';
  auto row = [&](const char* name, auto get) {
    out << std::left << std::setw(kLabel) << name;
    for (const auto& s : stats) out << std::right << std::setw(kCell) << get(s);
    out << '\n';
  };
  auto fixed4 = [](double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(4) << v;
    return ss.str();
  };
  row("Average", [&](const SegmentStats& s) { return fixed4(s.mean); });
  row("Std. deviation", [&](const SegmentStats& s) { return fixed4(s.std); });
  row("Batches", [](const SegmentStats& s) { return std::to_string(s.count); });
}

std::vector<WorkloadSegment> parse_schedule(const std::string& text) {
  std::vector<WorkloadSegment> out;
  std::stringstream items(text);
  for (std::string item; std::getline(items, item, ',');) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream fields(item);
    for (std::string f; std::getline(fields, f, ':');) parts.push_back(f);
    if (parts.size() < 2 || parts.size() > 4) {
      throw ConfigError("bad schedule segment '" + item + "', expected label:seconds[:sigma[:speed]]");
    }
    try {
      WorkloadSegment seg{parts[0], std::stod(parts[1]), 1.0, 1.0};
      if (parts.size() > 2) seg.sigma_multiplier = std::stod(parts[2]);
      if (parts.size() > 3) seg.speed_cap_multiplier = std::stod(parts[3]);
      if (!(seg.duration_s > 0.0)) throw ConfigError("segment '" + item + "' has no duration");
      out.push_back(seg);
    } catch (const std::logic_error&) {
      throw ConfigError("bad number in schedule segment '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty schedule");
  return out;
}

}  // namespace behent
