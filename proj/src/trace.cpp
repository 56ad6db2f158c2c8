#include "behent/trace.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "behent/errors.hpp"
#include "behent/formats.hpp"

namespace behent {
namespace {

constexpr const char* kTracePrefix = "# behent-trace v1 ";

}  // namespace

std::string trace_header(const SessionConfig& config) {
  return std::string(kTracePrefix) + to_json(config).dump() + '\n' + kTraceColumns + '\n';
}

std::string format_row(const TraceRow& r) {
  std::string s;
  s += std::to_string(r.computation.t_ms);
  for (double v : {r.computation.hp_lin, r.computation.hp_ang, r.computation.total, r.wais_avg}) {
    s += ',';
    s += format_double(v);
  }
  s += ',';
  s += to_string(r.indication);
  s += ',' + format_double(r.alpha_lin) + ',' + format_double(r.alpha_ang) + ',' +
       std::to_string(r.profile_revision);
  return s;
}

TraceWriter::TraceWriter(std::ostream& out, const SessionConfig& config) : out_(out) {
  out_ << trace_header(config) << std::flush;
}

void TraceWriter::write(const TraceRow& row) { out_ << format_row(row) << '\n' << std::flush; }

TraceFile read_trace(std::istream& in) {
  TraceFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line.rfind(kTracePrefix, 0) != 0) throw FormatError(line_no, "missing trace header");
      try {
        file.config = nlohmann::json::parse(line.substr(std::string(kTracePrefix).size()));
      } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(line_no, e.what());
      }
      continue;
    }
    if (line_no == 2) {
      if (line != kTraceColumns) throw FormatError(line_no, "unexpected trace columns");
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 9) throw FormatError(line_no, "expected 9 columns");
    try {
      TraceRow r;
      r.computation.t_ms = std::stoll(cells[0]);
      r.computation.hp_lin = std::stod(cells[1]);
      r.computation.hp_ang = std::stod(cells[2]);
      r.computation.total = std::stod(cells[3]);
      r.wais_avg = std::stod(cells[4]);
      if (cells[5] == "HIGH") {
        r.indication = Indication::kHigh;
      } else if (cells[5] == "NORMAL") {
        r.indication = Indication::kNormal;
      } else {
        throw FormatError(line_no, "bad indication '" + cells[5] + "'");
      }
      r.alpha_lin = std::stod(cells[6]);
      r.alpha_ang = std::stod(cells[7]);
      r.profile_revision = std::stoi(cells[8]);
      file.rows.push_back(r);
    } catch (const std::logic_error&) {
      throw FormatError(line_no, "bad number");
    }
  }
  return file;
}

TraceFile read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Fault("cannot open " + path.string());
  return read_trace(in);
}

}  // namespace behent
