#include "behent/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "behent/dpu.hpp"
#include "behent/errors.hpp"

namespace behent {
namespace {

void check_coverage(std::span<const double> errors, double alpha) {
  const auto within = std::count_if(errors.begin(), errors.end(),
                                    [alpha](double e) { return std::abs(e) <= alpha; });
  if (10 * static_cast<std::size_t>(within) < 9 * errors.size()) {
    throw ProfileError("alpha covers fewer than 90% of baseline errors");
  }
}

}  // namespace

Baseline build_baseline(std::span<const ErrorPair> errors, std::int64_t origin_ms,
                        const EntropyConfig& config, std::size_t min_errors) {
  if (errors.size() < min_errors) {
    throw BaselineError("insufficient baseline data: " + std::to_string(errors.size()) +
                        " errors per dimension, need " + std::to_string(min_errors));
  }
  std::vector<double> lin, ang;
  lin.reserve(errors.size());
  ang.reserve(errors.size());
  for (const auto& e : errors) {
    lin.push_back(e.err_lin);
    ang.push_back(e.err_ang);
  }

  Baseline b;
  b.error_count = errors.size();
  b.profile = DriverProfile::from_alpha(compute_alpha(lin), compute_alpha(ang), errors.back().t_ms, 0);
  check_coverage(lin, b.profile.alpha_lin);
  check_coverage(ang, b.profile.alpha_ang);

  EntropyScheduler scheduler(config);
  scheduler.advance(origin_ms);
  auto run_ticks = [&](const std::vector<std::int64_t>& ticks) {
    for (auto tick : ticks) {
      if (auto c = scheduler.on_tick(tick, b.profile)) b.entropy_history.push_back(c->total);
    }
  };
  for (const auto& e : errors) {
    run_ticks(scheduler.advance(e.t_ms));
    scheduler.add(e);
  }
  run_ticks(scheduler.close_through(errors.back().t_ms));

  b.thresholds = seed_thresholds(std::span<const double>(b.entropy_history));
  return b;
}

std::size_t required_baseline_errors(double duration_s, const EntropyConfig& config) {
  const double nominal = duration_s / config.error_interval_s;
  return std::max(kMinBaselineErrors, static_cast<std::size_t>(std::floor(0.9 * nominal)));
}

Baseline baseline_from_commands(std::span<const CommandSample> commands, double duration_s,
                                const EntropyConfig& config, PredictorForm form,
                                std::size_t min_errors) {
  if (commands.empty()) {
    throw BaselineError("insufficient baseline data: 0 commands, need " +
                        std::to_string(min_errors) + " errors per dimension");
  }
  const std::int64_t origin = commands.front().t_ms;
  const auto end = origin + static_cast<std::int64_t>(std::llround(duration_s * 1000.0));
  Estimator estimator(form);
  std::vector<ErrorPair> errors;
  for (const auto& c : commands) {
    if (c.t_ms >= end) break;
    if (auto e = estimator.ingest(c).error) errors.push_back(*e);
  }
  return build_baseline(errors, origin, config, min_errors);
}

Baseline skipped_baseline(double alpha_lin, double alpha_ang) {
  Baseline b;
  b.profile = DriverProfile::from_alpha(alpha_lin, alpha_ang, 0, 0);
  b.thresholds = seed_thresholds(std::nullopt);
  return b;
}

}  // namespace behent
