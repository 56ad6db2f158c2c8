#pragma once

// One operator session: estimator -> entropy ticks -> WAIS -> DPU, with the
// profile replaced atomically whenever the DPU emits an update.

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "behent/baseline.hpp"
#include "behent/dpu.hpp"
#include "behent/entropy.hpp"
#include "behent/estimator.hpp"
#include "behent/profile.hpp"
#include "behent/wais.hpp"

namespace behent {

struct SessionConfig {
  EntropyConfig entropy;
  WaisConfig wais;
  bool dpu_enabled = true;
  PredictorForm predictor = PredictorForm::kSummedDifferences;
  /// Alphas used when the baseline run is skipped.
  double default_alpha_lin = 0.15;
  double default_alpha_ang = 0.30;
  std::string baseline_source = "defaults";
  std::uint64_t seed = 0;

  void validate() const;
};

/// Emitted once per entropy computation, after WAIS has seen it.
struct EntropyEvent {
  EntropyComputation computation;
  double avg = 0.0;
  Indication indication = Indication::kNormal;

  friend bool operator==(const EntropyEvent&, const EntropyEvent&) = default;
};

using SessionEvent = std::variant<EntropyEvent, TransitionEvent, ProfileUpdate>;

/// State after one entropy computation; one trace CSV row.
struct TraceRow {
  EntropyComputation computation;
  double wais_avg = 0.0;
  Indication indication = Indication::kNormal;
  double alpha_lin = 0.0;
  double alpha_ang = 0.0;
  int profile_revision = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

class Session {
 public:
  using RowSink = std::function<void(const TraceRow&)>;

  Session(SessionConfig config, const Baseline& baseline);

  /// Feeds one raw command. Throws StreamIntegrityError on a bad sample,
  /// leaving the session unchanged.
  std::vector<SessionEvent> ingest(const CommandSample& s);
  /// Closes every tick up to the last ingested timestamp.
  std::vector<SessionEvent> finish();

  void set_row_sink(RowSink sink) { sink_ = std::move(sink); }

  const SessionConfig& config() const noexcept { return config_; }
  const DriverProfile& profile() const noexcept { return profile_; }
  const IndicationState& indication() const noexcept { return indication_; }
  const DpuState& dpu() const noexcept { return dpu_; }
  const std::vector<TraceRow>& rows() const noexcept { return rows_; }
  std::size_t error_count() const noexcept { return error_count_; }

 private:
  void run_ticks(const std::vector<std::int64_t>& ticks, std::vector<SessionEvent>& out);

  SessionConfig config_;
  Estimator estimator_;
  EntropyScheduler scheduler_;
  DriverProfile profile_;
  DpuState dpu_;
  IndicationState indication_;
  ErrorHistory recent_errors_;
  std::vector<TraceRow> rows_;
  std::size_t error_count_ = 0;
  RowSink sink_;
};

}  // namespace behent
