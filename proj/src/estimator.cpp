#include "behent/estimator.hpp"

#include <cmath>
#include <string>

#include "behent/errors.hpp"

namespace behent {

double predict_next(double oldest, double middle, double newest, PredictorForm form) {
  const double d1 = newest - middle;
  const double d2 = middle - oldest;
  switch (form) {
    case PredictorForm::kClassical:
      return newest + d1 + (d1 - d2) / 2.0;
    case PredictorForm::kSummedDifferences:
    default:
      return newest + d1 + (d1 + d2);
  }
}

std::optional<FilteredSample> BlockAverager::push(const CommandSample& s) {
  if (last_t_ms_ && s.t_ms <= *last_t_ms_) {
    throw StreamIntegrityError("non-monotonic timestamp: " + std::to_string(s.t_ms) +
                               " after " + std::to_string(*last_t_ms_));
  }
  if (s.t_ms < 0) {
    throw StreamIntegrityError("negative timestamp: " + std::to_string(s.t_ms));
  }
  if (!std::isfinite(s.lin) || !std::isfinite(s.ang)) {
    throw StreamIntegrityError("non-finite command at t_ms=" + std::to_string(s.t_ms));
  }
  last_t_ms_ = s.t_ms;
  block_[count_++] = s;
  if (count_ < kBlockSize) return std::nullopt;

  count_ = 0;
  return FilteredSample{
      s.t_ms,
      (block_[0].lin + block_[1].lin + block_[2].lin) / 3.0,
      (block_[0].ang + block_[1].ang + block_[2].ang) / 3.0,
  };
}

void PredictorWindow::push(const FilteredSample& s) {
  if (size_ < kSize) {
    entries_[size_++] = s;
    return;
  }
  entries_[0] = entries_[1];
  entries_[1] = entries_[2];
  entries_[2] = s;
}

std::optional<Velocity> predict(const PredictorWindow& w, PredictorForm form) {
  if (!w.full()) return std::nullopt;
  const auto& a = w.at(0);
  const auto& b = w.at(1);
  const auto& c = w.at(2);
  return Velocity{predict_next(a.lin, b.lin, c.lin, form),
                  predict_next(a.ang, b.ang, c.ang, form)};
}

ErrorPair estimation_error(const FilteredSample& measured, const Velocity& predicted) {
  return ErrorPair{measured.t_ms, measured.lin - predicted.lin, measured.ang - predicted.ang,
                   measured.lin == 0.0 && measured.ang == 0.0};
}

Estimator::Output Estimator::ingest(const CommandSample& s) {
  Output out;
  out.filtered = averager_.push(s);
  ++raw_count_;
  if (!out.filtered) return out;

  ++filtered_count_;
  if (auto predicted = predict(window_, form_)) {
    out.error = estimation_error(*out.filtered, *predicted);
  }
  window_.push(*out.filtered);
  return out;
}

}  // namespace behent
