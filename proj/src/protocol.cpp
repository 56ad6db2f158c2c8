#include "behent/protocol.hpp"

#include "behent/errors.hpp"

namespace behent {

using nlohmann::json;

CommandSample parse_command(std::string_view frame) {
  json j;
  try {
    j = json::parse(frame);
  } catch (const json::parse_error& e) {
    throw FormatError(1, std::string("invalid JSON frame: ") + e.what());
  }
  if (!j.is_object() || j.value("type", "") != "cmd") throw FormatError(1, "expected a cmd message");
  if (!j.contains("t_ms") || !j["t_ms"].is_number_integer() || !j.contains("lin") ||
      !j["lin"].is_number() || !j.contains("ang") || !j["ang"].is_number()) {
    throw FormatError(1, "cmd requires integer t_ms and numeric lin, ang");
  }
  return {j["t_ms"].get<std::int64_t>(), j["lin"].get<double>(), j["ang"].get<double>()};
}

json command_message(const CommandSample& s) {
  return {{"type", "cmd"}, {"t_ms", s.t_ms}, {"lin", s.lin}, {"ang", s.ang}};
}

json pose_message(const Pose& p, std::int64_t t_ms) {
  return {{"type", "pose"}, {"t_ms", t_ms}, {"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}

json rate_warning_message(double rate_hz, std::int64_t t_ms) {
  return {{"type", "rate_warning"}, {"t_ms", t_ms}, {"rate_hz", rate_hz}, {"nominal_hz", 20.0}};
}

json close_message(std::string_view reason) { return {{"type", "close"}, {"reason", reason}}; }

json event_message(const SessionEvent& e) {
  struct Visitor {
    json operator()(const EntropyEvent& ev) const {
      return {{"type", "entropy"},
              {"t_ms", ev.computation.t_ms},
              {"hp_lin", ev.computation.hp_lin},
              {"hp_ang", ev.computation.hp_ang},
              {"total", ev.computation.total},
              {"avg", ev.avg}};
    }
    json operator()(const TransitionEvent& ev) const {
      return {{"type", "indication"},
              {"state", std::string(to_string(ev.to))},
              {"t_ms", ev.t_ms},
              {"avg", ev.avg},
              {"play_ping", ev.play_ping}};
    }
    json operator()(const ProfileUpdate& u) const {
      return {{"type", "profile_update"},
              {"t_ms", u.t_ms},
              {"alpha_lin", u.alpha_lin},
              {"alpha_ang", u.alpha_ang},
              {"revision", u.revision}};
    }
  };
  return std::visit(Visitor{}, e);
}

}  // namespace behent
