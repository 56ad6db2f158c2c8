#pragma once

// Driver profile: the 90th-percentile error magnitude (alpha) per dimension
// and the eight bin boundaries derived from it.

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "behent/estimator.hpp"

namespace behent {

inline constexpr double kAlphaFloor = 1e-9;
inline constexpr std::size_t kBinCount = 9;

using Boundaries = std::array<double, kBinCount - 1>;

/// Nearest-rank 90th percentile of |errors|: the ceil(0.9 n)-th smallest
/// magnitude, floored at kAlphaFloor. Throws ProfileError on empty input.
double compute_alpha(std::span<const double> errors);

/// [-5a, -2.5a, -a, -0.5a, 0.5a, a, 2.5a, 5a]. Throws ProfileError unless a > 0.
Boundaries bin_boundaries(double alpha);

/// 1-based bin of `error`. Bins are [b(i-1), b(i)) with open outer tails,
/// so a value sitting exactly on a boundary belongs to the bin above it.
int bin_index(double error, const Boundaries& boundaries);

/// Entropy-statistic thresholds that gate a profile update. Infinity means
/// "no prior knowledge": the first eligible window always qualifies.
struct DpuThresholds {
  double avg = std::numeric_limits<double>::infinity();
  double std = std::numeric_limits<double>::infinity();

  friend bool operator==(const DpuThresholds&, const DpuThresholds&) = default;
};

struct DriverProfile {
  double alpha_lin = 0.0;
  double alpha_ang = 0.0;
  Boundaries boundaries_lin{};
  Boundaries boundaries_ang{};
  std::int64_t created_at = 0;
  int revision = 0;

  static DriverProfile from_alpha(double alpha_lin, double alpha_ang, std::int64_t created_at = 0,
                                  int revision = 0);

  friend bool operator==(const DriverProfile&, const DriverProfile&) = default;
};

/// Bounded FIFO of the most recent estimation errors.
class ErrorHistory {
 public:
  explicit ErrorHistory(std::size_t capacity);

  void push(const ErrorPair& e);
  void clear() { entries_.clear(); }

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return entries_.empty(); }

  /// Oldest first.
  std::vector<ErrorPair> snapshot() const { return {entries_.begin(), entries_.end()}; }
  std::vector<double> lin() const;
  std::vector<double> ang() const;

 private:
  std::size_t capacity_;
  std::deque<ErrorPair> entries_;
};

}  // namespace behent
