#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "behent/estimator.hpp"
#include "behent/profile.hpp"

namespace behent {

struct EntropyConfig {
  double period_s = 2.5;
  std::array<double, 2> weights{0.5, 0.5};  ///< (linear, angular)
  double error_interval_s = 0.15;

  /// Throws ConfigError. The usable computation rate is 0.2 Hz to 0.4 Hz.
  void validate() const;
  std::int64_t period_ms() const;
  /// round(period / error interval); advisory only.
  std::size_t expected_batch_size() const;
};

using Frequencies = std::array<double, kBinCount>;

/// Relative bin frequencies of `batch`. Throws ProfileError on an empty batch.
Frequencies histogram(std::span<const double> batch, const Boundaries& boundaries);

/// Base-9 Shannon entropy, in [0, 1]. Zero-probability bins contribute 0.
/// Throws ProfileError if the frequencies do not sum to 1 within 1e-9.
double entropy(const Frequencies& p);

double total_entropy(double hp_lin, double hp_ang, const std::array<double, 2>& weights);

struct EntropyComputation {
  std::int64_t t_ms = 0;
  double hp_lin = 0.0;
  double hp_ang = 0.0;
  double total = 0.0;
  std::size_t batch_size = 0;

  friend bool operator==(const EntropyComputation&, const EntropyComputation&) = default;
};

/// Entropy of one batch of errors against `profile`. Empty when the batch
/// is empty or the robot was stationary for the whole batch.
std::optional<EntropyComputation> compute_batch(std::span<const ErrorPair> batch,
                                                const DriverProfile& profile,
                                                const EntropyConfig& config, std::int64_t t_ms);

/// Collects errors into disjoint batches on a fixed tick schedule.
///
/// Ticks fall at origin + k * period (k >= 1), where the origin is the first
/// observed timestamp. A batch holds the errors stamped in (T - period, T].
/// Tick T closes once a later timestamp is observed, or explicitly via
/// close_through().
class EntropyScheduler {
 public:
  explicit EntropyScheduler(EntropyConfig config);

  /// Registers session time. Returns the ticks that are now due (T < t_ms),
  /// oldest first. Call before add() for errors stamped t_ms.
  std::vector<std::int64_t> advance(std::int64_t t_ms);
  /// Ticks with T <= t_ms.
  std::vector<std::int64_t> close_through(std::int64_t t_ms);

  void add(const ErrorPair& e) { pending_.push_back(e); }

  /// Evaluates and clears the pending batch for `tick_ms`.
  std::optional<EntropyComputation> on_tick(std::int64_t tick_ms, const DriverProfile& profile);

  const EntropyConfig& config() const noexcept { return config_; }
  std::size_t idle_ticks() const noexcept { return idle_ticks_; }
  std::size_t pending() const noexcept { return pending_.size(); }

 private:
  std::vector<std::int64_t> due(std::int64_t t_ms, bool inclusive);

  EntropyConfig config_;
  std::optional<std::int64_t> next_tick_;
  std::vector<ErrorPair> pending_;
  std::size_t idle_ticks_ = 0;
};

}  // namespace behent
