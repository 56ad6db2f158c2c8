#pragma once

// Driver profile update. Watches the total-entropy history and, when the
// last window is both calmer (lower mean) and steadier (lower std) than the
// stored thresholds, refits alpha from the most recent estimation errors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "behent/estimator.hpp"
#include "behent/profile.hpp"

namespace behent {

inline constexpr std::size_t kDpuWindow = 100;

/// Arithmetic mean; 0 for an empty span.
double mean(std::span<const double> xs);
/// Population standard deviation (divides by n); 0 for an empty span.
double population_std(std::span<const double> xs);

/// Mean/std of a baseline entropy history, or infinity sentinels when there is none.
DpuThresholds seed_thresholds(std::optional<std::span<const double>> history);

struct DpuState {
  DpuThresholds thresholds;
  std::vector<double> entropy_history;  ///< append-only total entropies
  std::size_t since_update = 0;         ///< entries appended since the last accepted update
  std::vector<double> error_history_lin;
  std::vector<double> error_history_ang;
  std::size_t window = kDpuWindow;

  explicit DpuState(DpuThresholds t = {}) : thresholds(t) {}

  void record(double total) {
    entropy_history.push_back(total);
    ++since_update;
  }
};

struct ProfileUpdate {
  double alpha_lin = 0.0;
  double alpha_ang = 0.0;
  Boundaries boundaries_lin{};
  Boundaries boundaries_ang{};
  DpuThresholds thresholds;
  std::int64_t t_ms = 0;
  int revision = 0;

  DriverProfile profile() const;

  friend bool operator==(const ProfileUpdate&, const ProfileUpdate&) = default;
};

/// One evaluation of the update rule. `recent_errors` are the latest
/// estimation errors, oldest first; only the last `state.window` are used.
/// Mutates `state` only when an update is emitted.
std::optional<ProfileUpdate> dpu_step(DpuState& state, std::span<const ErrorPair> recent_errors,
                                      std::int64_t t_ms, int current_revision);

}  // namespace behent
