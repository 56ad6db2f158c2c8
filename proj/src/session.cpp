#include "behent/session.hpp"

#include "behent/errors.hpp"

namespace behent {

void SessionConfig::validate() const {
  entropy.validate();
  wais.validate();
  if (!(default_alpha_lin > 0.0) || !(default_alpha_ang > 0.0)) {
    throw ConfigError("default alphas must be positive");
  }
}

Session::Session(SessionConfig config, const Baseline& baseline)
    : config_(std::move(config)),
      estimator_(config_.predictor),
      scheduler_(config_.entropy),
      profile_(baseline.profile),
      dpu_(baseline.thresholds),
      recent_errors_(kDpuWindow) {
  config_.validate();
}

std::vector<SessionEvent> Session::ingest(const CommandSample& s) {
  auto produced = estimator_.ingest(s);
  std::vector<SessionEvent> out;
  run_ticks(scheduler_.advance(s.t_ms), out);
  if (produced.error) {
    scheduler_.add(*produced.error);
    recent_errors_.push(*produced.error);
    ++error_count_;
  }
  return out;
}

std::vector<SessionEvent> Session::finish() {
  std::vector<SessionEvent> out;
  if (auto last = estimator_.last_t_ms()) run_ticks(scheduler_.close_through(*last), out);
  return out;
}

void Session::run_ticks(const std::vector<std::int64_t>& ticks, std::vector<SessionEvent>& out) {
  for (const auto tick : ticks) {
    auto computation = scheduler_.on_tick(tick, profile_);
    if (!computation) continue;

    auto step = wais_step(std::move(indication_), *computation, config_.wais);
    indication_ = std::move(step.state);
    out.emplace_back(EntropyEvent{*computation, indication_.avg, indication_.status});
    if (step.event) out.emplace_back(*step.event);

    dpu_.record(computation->total);
    if (config_.dpu_enabled) {
      const auto recent = recent_errors_.snapshot();
      if (auto update = dpu_step(dpu_, recent, tick, profile_.revision)) {
        profile_ = update->profile();
        out.emplace_back(*update);
      }
    }

    TraceRow row{*computation, indication_.avg, indication_.status,
                 profile_.alpha_lin, profile_.alpha_ang, profile_.revision};
    rows_.push_back(row);
    if (sink_) sink_(row);
  }
}

}  // namespace behent
