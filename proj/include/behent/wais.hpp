#pragma once

// Warning and indication: a short moving average of total entropy compared
// against a fixed threshold, with NORMAL/HIGH transitions reported as events.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string_view>

#include "behent/entropy.hpp"

namespace behent {

struct WaisConfig {
  std::size_t window = 5;
  double threshold = 0.6;
  /// HIGH clears only once avg <= threshold - hysteresis.
  double hysteresis = 0.0;

  void validate() const;
};

enum class Indication { kNormal, kHigh };

std::string_view to_string(Indication i);

struct IndicationState {
  double avg = 0.0;
  Indication status = Indication::kNormal;
  std::optional<std::int64_t> last_transition_t_ms;
  std::deque<double> recent;  ///< last `window` totals, oldest first
};

struct TransitionEvent {
  std::int64_t t_ms = 0;
  Indication to = Indication::kNormal;
  double avg = 0.0;
  bool play_ping = false;  ///< set on NORMAL -> HIGH only

  friend bool operator==(const TransitionEvent&, const TransitionEvent&) = default;
};

/// Mean of a partial window; empty when there is nothing to average.
std::optional<double> warmup_average(std::span<const double> totals);

struct WaisStep {
  IndicationState state;
  std::optional<TransitionEvent> event;
};

WaisStep wais_step(IndicationState state, const EntropyComputation& e, const WaisConfig& cfg);

}  // namespace behent
