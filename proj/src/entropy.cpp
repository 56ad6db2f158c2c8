#include "behent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "behent/errors.hpp"

namespace behent {

void EntropyConfig::validate() const {
  if (!(period_s > 0.0) || !std::isfinite(period_s)) {
    throw ConfigError("entropy period must be positive");
  }
  const double rate = 1.0 / period_s;
  // 1e-12 slack keeps the 2.5 s / 5 s endpoints valid
  if (rate < 0.2 - 1e-12 || rate > 0.4 + 1e-12) {
    throw ConfigError("entropy rate " + std::to_string(rate) + " Hz outside [0.2, 0.4] Hz");
  }
  if (weights[0] < 0.0 || weights[1] < 0.0 || std::abs(weights[0] + weights[1] - 1.0) > 1e-9) {
    throw ConfigError("entropy weights must be non-negative and sum to 1");
  }
  if (!(error_interval_s > 0.0)) throw ConfigError("error interval must be positive");
}

std::int64_t EntropyConfig::period_ms() const {
  return static_cast<std::int64_t>(std::llround(period_s * 1000.0));
}

std::size_t EntropyConfig::expected_batch_size() const {
  return static_cast<std::size_t>(std::llround(period_s / error_interval_s));
}

Frequencies histogram(std::span<const double> batch, const Boundaries& boundaries) {
  if (batch.empty()) throw ProfileError("histogram of an empty batch");
  std::array<std::size_t, kBinCount> counts{};
  for (double e : batch) ++counts[static_cast<std::size_t>(bin_index(e, boundaries) - 1)];
  Frequencies p{};
  const auto n = static_cast<double>(batch.size());
  for (std::size_t i = 0; i < kBinCount; ++i) p[i] = static_cast<double>(counts[i]) / n;
  return p;
}

double entropy(const Frequencies& p) {
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9 || std::any_of(p.begin(), p.end(), [](double v) { return v < 0.0; })) {
    throw ProfileError("frequencies are not a probability vector (sum " + std::to_string(sum) + ")");
  }
  const double log9 = std::log(9.0);
  double h = 0.0;
  for (double pi : p) {
    if (pi > 0.0) h -= pi * (std::log(pi) / log9);
  }
  // rounding can leave -0.0 or 1 + ulp
  return std::clamp(h, 0.0, 1.0);
}

double total_entropy(double hp_lin, double hp_ang, const std::array<double, 2>& weights) {
  return weights[0] * hp_lin + weights[1] * hp_ang;
}

std::optional<EntropyComputation> compute_batch(std::span<const ErrorPair> batch,
                                                const DriverProfile& profile,
                                                const EntropyConfig& config, std::int64_t t_ms) {
  if (batch.empty()) return std::nullopt;
  if (std::all_of(batch.begin(), batch.end(), [](const ErrorPair& e) { return e.stationary; })) {
    return std::nullopt;
  }
  std::vector<double> lin, ang;
  lin.reserve(batch.size());
  ang.reserve(batch.size());
  for (const auto& e : batch) {
    lin.push_back(e.err_lin);
    ang.push_back(e.err_ang);
  }
  EntropyComputation c;
  c.t_ms = t_ms;
  c.hp_lin = entropy(histogram(lin, profile.boundaries_lin));
  c.hp_ang = entropy(histogram(ang, profile.boundaries_ang));
  c.total = total_entropy(c.hp_lin, c.hp_ang, config.weights);
  c.batch_size = batch.size();
  return c;
}

EntropyScheduler::EntropyScheduler(EntropyConfig config) : config_(config) { config_.validate(); }

std::vector<std::int64_t> EntropyScheduler::due(std::int64_t t_ms, bool inclusive) {
  if (!next_tick_) next_tick_ = t_ms + config_.period_ms();
  std::vector<std::int64_t> ticks;
  while (inclusive ? *next_tick_ <= t_ms : *next_tick_ < t_ms) {
    ticks.push_back(*next_tick_);
    *next_tick_ += config_.period_ms();
  }
  return ticks;
}

std::vector<std::int64_t> EntropyScheduler::advance(std::int64_t t_ms) { return due(t_ms, false); }

std::vector<std::int64_t> EntropyScheduler::close_through(std::int64_t t_ms) {
  return due(t_ms, true);
}

std::optional<EntropyComputation> EntropyScheduler::on_tick(std::int64_t tick_ms,
                                                            const DriverProfile& profile) {
  auto result = compute_batch(pending_, profile, config_, tick_ms);
  pending_.clear();
  if (!result) ++idle_ticks_;
  return result;
}

}  // namespace behent
