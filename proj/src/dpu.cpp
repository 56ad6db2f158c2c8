#include "behent/dpu.hpp"

#include <cmath>
#include <numeric>

namespace behent {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

DpuThresholds seed_thresholds(std::optional<std::span<const double>> history) {
  if (!history || history->empty()) return {};
  return {mean(*history), population_std(*history)};
}

DriverProfile ProfileUpdate::profile() const {
  DriverProfile p;
  p.alpha_lin = alpha_lin;
  p.alpha_ang = alpha_ang;
  p.boundaries_lin = boundaries_lin;
  p.boundaries_ang = boundaries_ang;
  p.created_at = t_ms;
  p.revision = revision;
  return p;
}

std::optional<ProfileUpdate> dpu_step(DpuState& state, std::span<const ErrorPair> recent_errors,
                                      std::int64_t t_ms, int current_revision) {
  const std::size_t w = state.window;
  if (state.since_update < w || state.entropy_history.size() < w || recent_errors.empty()) {
    return std::nullopt;
  }
  const std::span<const double> last(state.entropy_history.end() - static_cast<std::ptrdiff_t>(w),
                                     state.entropy_history.end());
  const double avg = mean(last);
  if (!(avg < state.thresholds.avg)) return std::nullopt;
  const double sd = population_std(last);
  if (!(sd < state.thresholds.std)) return std::nullopt;

  const auto errors = recent_errors.size() > w ? recent_errors.last(w) : recent_errors;
  state.error_history_lin.clear();
  state.error_history_ang.clear();
  for (const auto& e : errors) {
    state.error_history_lin.push_back(e.err_lin);
    state.error_history_ang.push_back(e.err_ang);
  }
  state.thresholds = {avg, sd};
  state.since_update = 0;

  ProfileUpdate u;
  u.alpha_lin = compute_alpha(state.error_history_lin);
  u.alpha_ang = compute_alpha(state.error_history_ang);
  u.boundaries_lin = bin_boundaries(u.alpha_lin);
  u.boundaries_ang = bin_boundaries(u.alpha_ang);
  u.thresholds = state.thresholds;
  u.t_ms = t_ms;
  u.revision = current_revision + 1;
  return u;
}

}  // namespace behent
