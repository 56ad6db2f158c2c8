#pragma once

// Trial-run baseline: the initial driver profile plus DPU thresholds seeded
// from the entropy history that profile produces over the same run.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "behent/entropy.hpp"
#include "behent/estimator.hpp"
#include "behent/profile.hpp"

namespace behent {

inline constexpr std::size_t kMinBaselineErrors = 100;

struct Baseline {
  DriverProfile profile;
  DpuThresholds thresholds;
  std::vector<double> entropy_history;
  std::size_t error_count = 0;
};

/// Errors a trial run of `duration_s` must yield: 90% of the nominal count,
/// never fewer than kMinBaselineErrors.
std::size_t required_baseline_errors(double duration_s, const EntropyConfig& config);

/// Builds a baseline from estimation errors. `origin_ms` anchors the entropy
/// tick schedule (normally the first raw sample's timestamp). Throws
/// BaselineError when either dimension has fewer than `min_errors` errors.
Baseline build_baseline(std::span<const ErrorPair> errors, std::int64_t origin_ms,
                        const EntropyConfig& config, std::size_t min_errors = kMinBaselineErrors);

/// Runs raw commands stamped before origin + duration through the estimator,
/// then build_baseline().
Baseline baseline_from_commands(std::span<const CommandSample> commands, double duration_s,
                                const EntropyConfig& config,
                                PredictorForm form = PredictorForm::kSummedDifferences,
                                std::size_t min_errors = kMinBaselineErrors);

/// No trial run: fixed alphas and infinite thresholds.
Baseline skipped_baseline(double alpha_lin, double alpha_ang);

}  // namespace behent
