#include "behent/driver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "behent/errors.hpp"

namespace behent {
namespace {

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::fmod(a + pi, 2.0 * pi);
  if (a < 0.0) a += 2.0 * pi;
  return a - pi;
}

double ramp(double current, double target, double max_step) {
  return current + std::clamp(target - current, -max_step, max_step);
}

std::int64_t seconds_to_ms(double s) { return static_cast<std::int64_t>(std::llround(s * 1000.0)); }

}  // namespace

Pose step_unicycle(const Pose& p, double lin, double ang, double dt_s) {
  return {p.x + lin * std::cos(p.theta) * dt_s, p.y + lin * std::sin(p.theta) * dt_s,
          wrap_angle(p.theta + ang * dt_s)};
}

Arena Arena::standard() {
  Arena a;
  a.waypoints = {{2.0, 2.0}, {14.0, 2.0}, {14.0, 10.0}, {24.0, 10.0}};
  return a;
}

void Arena::validate() const {
  if (waypoints.size() < 2) throw SimulationError("arena needs at least two waypoints");
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const auto& w = waypoints[i];
    if (!std::isfinite(w.x) || !std::isfinite(w.y) || w.x < 0.0 || w.y < 0.0 || w.x > width ||
        w.y > height) {
      throw SimulationError("unreachable waypoint " + std::to_string(i) + " outside the arena");
    }
    if (i > 0 && std::hypot(w.x - waypoints[i - 1].x, w.y - waypoints[i - 1].y) <= waypoint_radius) {
      throw SimulationError("waypoint " + std::to_string(i) + " overlaps its predecessor");
    }
  }
  if (!(max_lin > 0.0) || !(max_ang > 0.0) || !(lin_accel > 0.0) || !(ang_accel > 0.0) ||
      !(waypoint_radius > 0.0)) {
    throw SimulationError("arena speed limits and waypoint radius must be positive");
  }
}

void DriverModel::validate() const {
  if (!(noise_sigma_lin >= 0.0) || !(noise_sigma_ang >= 0.0)) {
    throw SimulationError("noise sigma must be non-negative");
  }
  for (const auto& s : workload_schedule) {
    if (!(s.duration_s > 0.0) || !(s.sigma_multiplier >= 0.0) || !(s.speed_cap_multiplier > 0.0)) {
      throw SimulationError("invalid workload segment '" + s.label + "'");
    }
  }
  if (warning_response.enabled &&
      (!(warning_response.recovery_factor >= 0.0) || !(warning_response.reaction_delay_s >= 0.0))) {
    throw SimulationError("invalid warning response");
  }
}

std::vector<WorkloadSegment> decaying_schedule(double duration_s, double half_life_s, double step_s) {
  if (!(duration_s > 0.0) || !(half_life_s > 0.0) || !(step_s > 0.0)) {
    throw SimulationError("decaying schedule parameters must be positive");
  }
  std::vector<WorkloadSegment> out;
  for (double t = 0.0; t < duration_s; t += step_s) {
    const double len = std::min(step_s, duration_s - t);
    out.push_back({"decay", len, std::exp2(-t / half_life_s), 1.0});
  }
  return out;
}

SyntheticDriver::SyntheticDriver(DriverModel model, Arena arena)
    : model_(std::move(model)), arena_(std::move(arena)), rng_(model_.seed) {
  model_.validate();
  arena_.validate();
  // ping-pong route: A .. B .. (back to, excluding) A
  route_ = arena_.waypoints;
  for (std::size_t i = arena_.waypoints.size() - 1; i-- > 1;) route_.push_back(arena_.waypoints[i]);
  const auto& a = arena_.waypoints[0];
  const auto& b = arena_.waypoints[1];
  pose_ = {a.x, a.y, std::atan2(b.y - a.y, b.x - a.x)};
}

const WorkloadSegment& SyntheticDriver::segment_at(std::int64_t t_ms) const {
  if (model_.workload_schedule.empty()) return default_segment_;
  std::int64_t end = 0;
  for (const auto& s : model_.workload_schedule) {
    end += seconds_to_ms(s.duration_s);
    if (t_ms < end) return s;
  }
  return model_.workload_schedule.back();
}

double SyntheticDriver::noise_multiplier(std::int64_t t_ms) const {
  double m = segment_at(t_ms).sigma_multiplier;
  const auto& response = model_.warning_response;
  if (response.enabled && high_since_ && t_ms >= *high_since_ + seconds_to_ms(response.reaction_delay_s)) {
    m *= response.recovery_factor;
  }
  return m;
}

void SyntheticDriver::on_indication(Indication status, std::int64_t t_ms) {
  if (status == Indication::kHigh) {
    if (!high_since_) high_since_ = t_ms;
  } else {
    high_since_.reset();
  }
}

CommandSample SyntheticDriver::next() {
  constexpr double dt = static_cast<double>(kCommandPeriodMs) / 1000.0;
  const auto& seg = segment_at(t_ms_);

  auto target = route_[target_];
  if (std::hypot(target.x - pose_.x, target.y - pose_.y) < arena_.waypoint_radius) {
    target_ = (target_ + 1) % route_.size();
    target = route_[target_];
  }
  const double heading_error =
      wrap_angle(std::atan2(target.y - pose_.y, target.x - pose_.x) - pose_.theta);
  const double max_lin = arena_.max_lin * seg.speed_cap_multiplier;
  const double max_ang = arena_.max_ang * seg.speed_cap_multiplier;
  const double ang_target = std::clamp(arena_.heading_gain * heading_error, -max_ang, max_ang);
  const double facing = std::max(0.0, std::cos(heading_error));
  const double lin_target = max_lin * facing * facing;
  lin_ = ramp(lin_, lin_target, arena_.lin_accel * dt);
  ang_ = ramp(ang_, ang_target, arena_.ang_accel * dt);

  const double m = noise_multiplier(t_ms_);
  const double n_lin = noise_(rng_);
  const double n_ang = noise_(rng_);
  CommandSample s{t_ms_, lin_ + model_.noise_sigma_lin * m * n_lin,
                  ang_ + model_.noise_sigma_ang * m * n_ang};

  pose_ = step_unicycle(pose_, s.lin, s.ang, dt);
  t_ms_ += kCommandPeriodMs;
  return s;
}

TelemetryLog simulate_driver(const DriverModel& model, const Arena& arena, double duration_s) {
  SyntheticDriver driver(model, arena);
  const auto n = static_cast<std::size_t>(std::llround(duration_s * 1000.0 / kCommandPeriodMs));
  TelemetryLog log;
  log.reserve(n);
  for (std::size_t i = 0; i < n; ++i) log.push_back(driver.next());
  return log;
}

ClosedLoopRun simulate_closed_loop(const DriverModel& model, const Arena& arena, double duration_s,
                                   Session& session) {
  SyntheticDriver driver(model, arena);
  const auto n = static_cast<std::size_t>(std::llround(duration_s * 1000.0 / kCommandPeriodMs));
  ClosedLoopRun run;
  run.log.reserve(n);
  auto absorb = [&](std::vector<SessionEvent> events) {
    for (auto& e : events) {
      if (const auto* t = std::get_if<TransitionEvent>(&e)) driver.on_indication(t->to, t->t_ms);
      run.events.push_back(std::move(e));
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = driver.next();
    run.log.push_back(s);
    absorb(session.ingest(s));
  }
  absorb(session.finish());
  return run;
}

}  // namespace behent
