#pragma once

#include <span>
#include <vector>

#include "epcfg/latent.hpp"
#include "epcfg/sampler.hpp"

namespace epcfg {

// Per-step batch statistics over trajectory logs, in log order.
struct TraceSummary {
  std::vector<int> step;
  std::vector<double> mean_ratio;         // mean of e_cfg / e_c
  std::vector<double> max_ratio;          // max of e_cfg / e_c
  std::vector<double> fallback_fraction;  // fraction of fallback_used
  std::vector<double> mean_moment;        // mean of ||x_t||^2 / d
};

// Throws EmptyBatch for an empty batch (or empty logs) and RaggedLogs when
// logs disagree on length or step sequence.
TraceSummary trace_summary(std::span<const TrajectoryLog> logs);

struct MomentStats {
  std::vector<double> mean;   // componentwise sample mean
  double second_moment = 0.0; // (1/n) sum ||x||^2 / d
};

MomentStats moment_stats(std::span<const LatentTensor> samples);

// Two-sample energy distance 2 E||A-B|| - E||A-A'|| - E||B-B'|| with the
// expectations taken as full pairwise means. Arguments are ordered
// canonically before summation so the result is exactly symmetric.
double energy_distance(std::span<const LatentTensor> a,
                       std::span<const LatentTensor> b);

}  // namespace epcfg
