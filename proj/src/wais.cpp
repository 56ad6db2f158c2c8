#include "behent/wais.hpp"

#include <numeric>
#include <vector>

#include "behent/errors.hpp"

namespace behent {

void WaisConfig::validate() const {
  if (window < 1) throw ConfigError("WAIS window must be at least 1");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("WAIS threshold must lie in (0, 1)");
  if (!(hysteresis >= 0.0 && hysteresis < threshold)) {
    throw ConfigError("WAIS hysteresis must lie in [0, threshold)");
  }
}

std::string_view to_string(Indication i) { return i == Indication::kHigh ? "HIGH" : "NORMAL"; }

std::optional<double> warmup_average(std::span<const double> totals) {
  if (totals.empty()) return std::nullopt;
  return std::accumulate(totals.begin(), totals.end(), 0.0) / static_cast<double>(totals.size());
}

WaisStep wais_step(IndicationState state, const EntropyComputation& e, const WaisConfig& cfg) {
  state.recent.push_back(e.total);
  while (state.recent.size() > cfg.window) state.recent.pop_front();
  const std::vector<double> window(state.recent.begin(), state.recent.end());
  state.avg = *warmup_average(window);

  std::optional<TransitionEvent> event;
  if (state.status == Indication::kNormal && state.avg > cfg.threshold) {
    state.status = Indication::kHigh;
    event = TransitionEvent{e.t_ms, Indication::kHigh, state.avg, true};
  } else if (state.status == Indication::kHigh && state.avg <= cfg.threshold - cfg.hysteresis) {
    state.status = Indication::kNormal;
    event = TransitionEvent{e.t_ms, Indication::kNormal, state.avg, false};
  }
  if (event) state.last_transition_t_ms = e.t_ms;
  return {std::move(state), event};
}

}  // namespace behent
