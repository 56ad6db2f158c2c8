#include "behent/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "behent/errors.hpp"

namespace behent {

double compute_alpha(std::span<const double> errors) {
  if (errors.empty()) throw ProfileError("cannot compute alpha from an empty error list");

  std::vector<double> magnitudes(errors.size());
  std::transform(errors.begin(), errors.end(), magnitudes.begin(),
                 [](double e) { return std::abs(e); });

  // rank = ceil(0.9 n) in integer arithmetic, so n = 10k is exact
  const std::size_t n = magnitudes.size();
  const std::size_t rank = (9 * n + 9) / 10;
  auto nth = magnitudes.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(magnitudes.begin(), nth, magnitudes.end());
  return std::max(*nth, kAlphaFloor);
}

Boundaries bin_boundaries(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ProfileError("alpha must be positive and finite, got " + std::to_string(alpha));
  }
  return {-5.0 * alpha, -2.5 * alpha, -alpha, -0.5 * alpha,
          0.5 * alpha,  alpha,        2.5 * alpha, 5.0 * alpha};
}

int bin_index(double error, const Boundaries& boundaries) {
  const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), error);
  return static_cast<int>(it - boundaries.begin()) + 1;
}

DriverProfile DriverProfile::from_alpha(double alpha_lin, double alpha_ang, std::int64_t created_at,
                                        int revision) {
  DriverProfile p;
  p.alpha_lin = alpha_lin;
  p.alpha_ang = alpha_ang;
  p.boundaries_lin = bin_boundaries(alpha_lin);
  p.boundaries_ang = bin_boundaries(alpha_ang);
  p.created_at = created_at;
  p.revision = revision;
  return p;
}

ErrorHistory::ErrorHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("error history capacity must be positive");
}

void ErrorHistory::push(const ErrorPair& e) {
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back(e);
}

std::vector<double> ErrorHistory::lin() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.err_lin);
  return out;
}

std::vector<double> ErrorHistory::ang() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.err_ang);
  return out;
}

}  // namespace behent
