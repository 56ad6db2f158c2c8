#include "behent/formats.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "behent/errors.hpp"

namespace behent {

using nlohmann::json;

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Fault("cannot format number");
  return {buf.data(), end};
}

void write_telemetry(std::ostream& out, const TelemetryLog& log) {
  out << json{{"format", kTelemetryFormat}, {"version", kFormatVersion}}.dump() << '\n';
  for (const auto& s : log) {
    out << "{\"t_ms\":" << s.t_ms << ",\"lin\":" << format_double(s.lin)
        << ",\"ang\":" << format_double(s.ang) << "}\n";
  }
}

void write_telemetry(const std::filesystem::path& path, const TelemetryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Fault("cannot open " + path.string() + " for writing");
  write_telemetry(out, log);
}

TelemetryLog read_telemetry(std::istream& in) {
  TelemetryLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError(line_no, "record is not an object");
    if (j.contains("format")) {
      if (!log.empty() || j["format"] != kTelemetryFormat) {
        throw FormatError(line_no, "unexpected header");
      }
      if (j.value("version", 0) != kFormatVersion) {
        throw FormatError(line_no, "unsupported telemetry version");
      }
      continue;
    }
    if (!j.contains("t_ms") || !j["t_ms"].is_number_integer() || !j.contains("lin") ||
        !j["lin"].is_number() || !j.contains("ang") || !j["ang"].is_number()) {
      throw FormatError(line_no, "expected {\"t_ms\": int, \"lin\": number, \"ang\": number}");
    }
    CommandSample s{j["t_ms"].get<std::int64_t>(), j["lin"].get<double>(), j["ang"].get<double>()};
    if (s.t_ms < 0) throw FormatError(line_no, "negative timestamp");
    if (!log.empty() && s.t_ms <= log.back().t_ms) {
      throw FormatError(line_no, "timestamp regression (" + std::to_string(s.t_ms) + " after " +
                                     std::to_string(log.back().t_ms) + ")");
    }
    log.push_back(s);
  }
  return log;
}

TelemetryLog read_telemetry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Fault("cannot open " + path.string());
  return read_telemetry(in);
}

namespace {

json threshold_value(double v) { return std::isinf(v) ? json("inf") : json(v); }

double threshold_from(const json& j, const char* key) {
  if (!j.contains(key)) throw ProfileError(std::string("profile missing dpu.") + key);
  const auto& v = j[key];
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (v.is_number()) return v.get<double>();
  throw ProfileError(std::string("profile dpu.") + key + " must be a number or \"inf\"");
}

}  // namespace

json profile_to_json(const Baseline& b) {
  return json{
      {"format", kProfileFormat},
      {"version", kFormatVersion},
      {"alpha_lin", b.profile.alpha_lin},
      {"alpha_ang", b.profile.alpha_ang},
      {"revision", b.profile.revision},
      {"dpu", {{"avg", threshold_value(b.thresholds.avg)}, {"std", threshold_value(b.thresholds.std)}}},
      {"error_count", b.error_count},
      {"entropy_count", b.entropy_history.size()},
  };
}

Baseline profile_from_json(const json& j) {
  try {
    if (j.contains("format") && j["format"] != kProfileFormat) {
      throw ProfileError("not a driver profile document");
    }
    Baseline b;
    b.profile = DriverProfile::from_alpha(j.at("alpha_lin").get<double>(), j.at("alpha_ang").get<double>(),
                                          0, j.value("revision", 0));
    b.thresholds = {threshold_from(j.at("dpu"), "avg"), threshold_from(j.at("dpu"), "std")};
    b.error_count = j.value("error_count", std::size_t{0});
    return b;
  } catch (const json::exception& e) {
    throw ProfileError(std::string("malformed profile: ") + e.what());
  }
}

void write_profile(const std::filesystem::path& path, const Baseline& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Fault("cannot open " + path.string() + " for writing");
  out << profile_to_json(b).dump(2) << '\n';
}

Baseline read_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Fault("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProfileError(std::string("malformed profile: ") + e.what());
  }
  return profile_from_json(j);
}

json to_json(const SessionConfig& c) {
  return json{
      {"entropy",
       {{"period_s", c.entropy.period_s},
        {"weights", c.entropy.weights},
        {"error_interval_s", c.entropy.error_interval_s}}},
      {"wais",
       {{"window", c.wais.window}, {"threshold", c.wais.threshold}, {"hysteresis", c.wais.hysteresis}}},
      {"dpu_enabled", c.dpu_enabled},
      {"predictor", c.predictor == PredictorForm::kClassical ? "classical" : "summed"},
      {"default_alpha", {c.default_alpha_lin, c.default_alpha_ang}},
      {"baseline_source", c.baseline_source},
      {"seed", c.seed},
  };
}

}  // namespace behent
