#include "epcfg/schedule.hpp"

#include <cmath>
#include <string>

namespace epcfg {

DiffusionSchedule DiffusionSchedule::create(std::vector<double> alpha_bar) {
  if (alpha_bar.size() < 2)
    throw InvalidRange("schedule needs at least one step");
  if (alpha_bar.front() != 1.0)
    throw InvalidRange("alpha_bar[0] must be exactly 1");
  for (std::size_t t = 0; t < alpha_bar.size(); ++t) {
    const double a = alpha_bar[t];
    if (!(std::isfinite(a) && a > 0.0 && a <= 1.0))
      throw InvalidRange("alpha_bar[" + std::to_string(t) +
                         "] must lie in (0,1], got " + std::to_string(a));
    if (t > 0 && a > alpha_bar[t - 1])
      throw InvalidRange("alpha_bar must be non-increasing, rises at step " +
                         std::to_string(t));
  }
  return DiffusionSchedule(std::move(alpha_bar));
}

double DiffusionSchedule::alpha_bar(int t) const {
  if (t < 0 || t > steps())
    throw IndexOutOfRange("schedule step " + std::to_string(t) +
                          " outside [0, " + std::to_string(steps()) + "]");
  return levels_[static_cast<std::size_t>(t)];
}

DiffusionSchedule vp_schedule(int steps, double beta_min, double beta_max) {
  if (steps < 1)
    throw InvalidRange("schedule needs at least one step, got " +
                       std::to_string(steps));
  if (!(std::isfinite(beta_min) && std::isfinite(beta_max) &&
        0.0 <= beta_min && beta_min <= beta_max && beta_max < 1.0))
    throw InvalidRange("betas must satisfy 0 <= beta_min <= beta_max < 1");

  std::vector<double> levels(static_cast<std::size_t>(steps) + 1);
  levels[0] = 1.0;
  for (int t = 1; t <= steps; ++t) {
    const double beta =
        steps == 1 ? beta_min
                   : beta_min + (beta_max - beta_min) *
                                    (static_cast<double>(t - 1) /
                                     static_cast<double>(steps - 1));
    levels[static_cast<std::size_t>(t)] =
        levels[static_cast<std::size_t>(t - 1)] * (1.0 - beta);
  }
  return DiffusionSchedule::create(std::move(levels));
}

}  // namespace epcfg
