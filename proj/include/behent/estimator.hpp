#pragma once

// Command stream front end: 3-sample block averaging of the raw 20 Hz
// operator commands, the one-step velocity predictor, and the per-dimension
// estimation errors that feed the entropy stage.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace behent {

/// Raw operator command as received from the input device.
struct CommandSample {
  std::int64_t t_ms = 0;  ///< session-relative time, milliseconds
  double lin = 0.0;       ///< linear velocity command, m/s
  double ang = 0.0;       ///< angular velocity command, rad/s

  friend bool operator==(const CommandSample&, const CommandSample&) = default;
};

/// Block average of three consecutive raw commands, stamped with the last one.
struct FilteredSample {
  std::int64_t t_ms = 0;
  double lin = 0.0;
  double ang = 0.0;

  friend bool operator==(const FilteredSample&, const FilteredSample&) = default;
};

/// A (linear, angular) pair of predicted velocities.
struct Velocity {
  double lin = 0.0;
  double ang = 0.0;
};

/// Measured minus predicted, per dimension.
struct ErrorPair {
  std::int64_t t_ms = 0;
  double err_lin = 0.0;
  double err_ang = 0.0;
  /// Both measured filtered commands were exactly zero (robot not driven).
  bool stationary = false;

  friend bool operator==(const ErrorPair&, const ErrorPair&) = default;
};

enum class PredictorForm {
  /// x1 + (x1 - x2) + ((x1 - x2) + (x2 - x3)), the default.
  kSummedDifferences,
  /// x1 + (x1 - x2) + ((x1 - x2) - (x2 - x3)) / 2, classical Taylor form.
  kClassical,
};

/// Predicts the next value from the three previous ones.
/// `oldest`, `middle`, `newest` are x(n-3), x(n-2), x(n-1).
double predict_next(double oldest, double middle, double newest,
                    PredictorForm form = PredictorForm::kSummedDifferences);

/// Groups raw commands into non-overlapping blocks of three.
class BlockAverager {
 public:
  static constexpr std::size_t kBlockSize = 3;

  /// Throws StreamIntegrityError on a non-increasing timestamp or a
  /// non-finite velocity; a rejected sample leaves the state untouched.
  std::optional<FilteredSample> push(const CommandSample& s);

  std::size_t pending() const noexcept { return count_; }
  std::optional<std::int64_t> last_t_ms() const noexcept { return last_t_ms_; }

 private:
  std::array<CommandSample, kBlockSize> block_{};
  std::size_t count_ = 0;
  std::optional<std::int64_t> last_t_ms_;
};

/// The three most recent filtered samples, oldest first.
class PredictorWindow {
 public:
  static constexpr std::size_t kSize = 3;

  void push(const FilteredSample& s);
  bool full() const noexcept { return size_ == kSize; }
  std::size_t size() const noexcept { return size_; }
  /// i = 0 is the oldest entry.
  const FilteredSample& at(std::size_t i) const { return entries_.at(i); }

 private:
  std::array<FilteredSample, kSize> entries_{};
  std::size_t size_ = 0;
};

/// Empty while the window is still warming up.
std::optional<Velocity> predict(const PredictorWindow& w,
                                PredictorForm form = PredictorForm::kSummedDifferences);

ErrorPair estimation_error(const FilteredSample& measured, const Velocity& predicted);

/// Raw commands in, estimation errors out. One error per filtered sample
/// once three filtered samples have been seen.
class Estimator {
 public:
  explicit Estimator(PredictorForm form = PredictorForm::kSummedDifferences) : form_(form) {}

  struct Output {
    std::optional<FilteredSample> filtered;
    std::optional<ErrorPair> error;
  };

  Output ingest(const CommandSample& s);

  std::size_t raw_count() const noexcept { return raw_count_; }
  std::size_t filtered_count() const noexcept { return filtered_count_; }
  std::optional<std::int64_t> last_t_ms() const noexcept { return averager_.last_t_ms(); }

 private:
  PredictorForm form_;
  BlockAverager averager_;
  PredictorWindow window_;
  std::size_t raw_count_ = 0;
  std::size_t filtered_count_ = 0;
};

}  // namespace behent
