#pragma once

// Synthetic operators for verification: a smooth waypoint-following
// controller on a 2D unicycle, plus seeded additive jerk noise whose scale
// follows a workload schedule and can react to warnings.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "behent/estimator.hpp"
#include "behent/session.hpp"
#include "behent/wais.hpp"

namespace behent {

using TelemetryLog = std::vector<CommandSample>;

inline constexpr std::int64_t kCommandPeriodMs = 50;  // 20 Hz

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

Pose step_unicycle(const Pose& p, double lin, double ang, double dt_s);

struct Arena {
  /// Driven A -> ... -> B -> ... -> A repeatedly.
  std::vector<Point> waypoints;
  double width = 30.0;
  double height = 20.0;
  double waypoint_radius = 0.4;
  double max_lin = 1.0;    ///< m/s
  double max_ang = 0.6;    ///< rad/s
  double lin_accel = 0.05; ///< m/s^2, smooth controller ramp limit
  double ang_accel = 0.1;  ///< rad/s^2
  double heading_gain = 1.5;

  /// Two points of interest joined by an L-shaped corridor.
  static Arena standard();
  /// Throws SimulationError if a waypoint cannot be reached.
  void validate() const;
};

struct WorkloadSegment {
  std::string label;
  double duration_s = 0.0;
  double sigma_multiplier = 1.0;
  /// Scales the controller's speed caps (the doubled-max-speed condition).
  double speed_cap_multiplier = 1.0;
};

struct WarningResponse {
  bool enabled = false;
  double recovery_factor = 0.5;
  double reaction_delay_s = 1.0;
};

struct DriverModel {
  double noise_sigma_lin = 0.05;  ///< m/s per raw sample
  double noise_sigma_ang = 0.10;  ///< rad/s per raw sample
  /// Sequential segments; the last one persists past its end. Empty means x1.
  std::vector<WorkloadSegment> workload_schedule;
  WarningResponse warning_response;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Segments of `step_s` whose multiplier halves every `half_life_s`.
std::vector<WorkloadSegment> decaying_schedule(double duration_s, double half_life_s,
                                               double step_s = 10.0);

class SyntheticDriver {
 public:
  SyntheticDriver(DriverModel model, Arena arena);

  /// Next 20 Hz command; the first one is stamped t = 0.
  CommandSample next();
  /// Closed-loop feedback from the warning system.
  void on_indication(Indication status, std::int64_t t_ms);

  const Pose& pose() const noexcept { return pose_; }
  std::int64_t now_ms() const noexcept { return t_ms_; }
  const WorkloadSegment& segment_at(std::int64_t t_ms) const;
  /// Effective noise multiplier at `t_ms`, including any warning recovery.
  double noise_multiplier(std::int64_t t_ms) const;

 private:
  std::vector<Point> route_;
  std::size_t target_ = 1;
  DriverModel model_;
  Arena arena_;
  Pose pose_;
  double lin_ = 0.0;
  double ang_ = 0.0;
  std::int64_t t_ms_ = 0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  WorkloadSegment default_segment_{"baseline", 0.0, 1.0, 1.0};
  std::optional<std::int64_t> high_since_;
};

TelemetryLog simulate_driver(const DriverModel& model, const Arena& arena, double duration_s);

struct ClosedLoopRun {
  TelemetryLog log;
  std::vector<SessionEvent> events;
};

/// Drives `session` live, feeding indications back to the driver.
ClosedLoopRun simulate_closed_loop(const DriverModel& model, const Arena& arena, double duration_s,
                                   Session& session);

}  // namespace behent
