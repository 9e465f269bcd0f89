#pragma once

#include <vector>

#include "epcfg/errors.hpp"

namespace epcfg {

// Cumulative signal levels of a variance-preserving forward process.
// levels()[t] is alpha_bar after t noising steps: levels()[0] == 1, entries
// are non-increasing and stay inside (0, 1].
class DiffusionSchedule {
 public:
  // Throws InvalidRange on any violation of the invariants above.
  static DiffusionSchedule create(std::vector<double> alpha_bar);

  int steps() const noexcept { return static_cast<int>(levels_.size()) - 1; }

  // alpha_bar at step t in [0, steps()]. Throws IndexOutOfRange.
  double alpha_bar(int t) const;

  const std::vector<double>& levels() const noexcept { return levels_; }

 private:
  explicit DiffusionSchedule(std::vector<double> levels)
      : levels_(std::move(levels)) {}

  std::vector<double> levels_;
};

// Linear beta schedule: betas spaced evenly from beta_min to beta_max over
// `steps` steps, alpha_bar[t] = prod_{s<=t} (1 - beta_s). Throws
// InvalidRange unless steps >= 1 and 0 <= beta_min <= beta_max < 1.
DiffusionSchedule vp_schedule(int steps = 50, double beta_min = 1e-4,
                              double beta_max = 0.2);

}  // namespace epcfg
