#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "epcfg/guidance.hpp"
#include "epcfg/latent.hpp"
#include "epcfg/mixture.hpp"
#include "epcfg/schedule.hpp"

namespace epcfg {

// Which prediction the guidance combination acts on. Epsilon matches common
// latent-diffusion practice; X0 applies it to the denoised estimate instead.
enum class GuidanceSpace { Epsilon, X0 };

const char* to_string(GuidanceSpace space) noexcept;
GuidanceSpace guidance_space_from_string(std::string_view name);  // "epsilon" | "x0"

struct StepRecord {
  int step = 0;               // schedule index t, counted down from T to 1
  double e_c = 0.0;           // robust energy of the conditional prediction
  double e_cfg = 0.0;         // robust energy of the guidance output applied
  double scale = 1.0;         // factor applied to the combined prediction
  bool fallback_used = false;
  double state_moment = 0.0;  // ||x_t||^2 / d entering the step
};

using TrajectoryLog = std::vector<StepRecord>;

struct TrajectoryResult {
  LatentTensor sample;
  TrajectoryLog log;
};

// Noise implied by a clean estimate: (x_t - sqrt(ab) * x0) / sqrt(1 - ab).
// Throws DegenerateAlpha unless alpha_bar is in (0, 1).
LatentTensor eps_from_x0(const LatentTensor& x_t, const LatentTensor& x0,
                         double alpha_bar);

// Inverse map: (x_t - sqrt(1 - ab) * eps) / sqrt(ab), alpha_bar in (0, 1].
LatentTensor x0_from_eps(const LatentTensor& x_t, const LatentTensor& eps,
                         double alpha_bar);

// Deterministic denoising update from step t to t-1 given a clean estimate.
LatentTensor ddim_step(const LatentTensor& x_t, const LatentTensor& x0_pred,
                       const DiffusionSchedule& sched, int t);

// Runs one guided trajectory: x_T ~ N(0, I) from the seeded generator, then
// T deterministic denoising steps with the guidance combination applied in
// the chosen space. e_cfg in each log record is measured on the prediction
// actually handed to the update, so post-rescale records witness energy
// preservation instead of restating it.
TrajectoryResult sample_trajectory(const MixtureModel& cond,
                                   const MixtureModel& uncond,
                                   const DiffusionSchedule& sched,
                                   const GuidanceParams& params,
                                   GuidanceSpace space, std::uint64_t seed);

// Batch of independent trajectories with per-index substream seeds; results
// are identical whatever the thread count. threads == 0 picks a default.
std::vector<TrajectoryResult> run_batch(const MixtureModel& cond,
                                        const MixtureModel& uncond,
                                        const DiffusionSchedule& sched,
                                        const GuidanceParams& params,
                                        GuidanceSpace space,
                                        std::uint64_t base_seed, int count,
                                        int threads = 0);

std::vector<LatentTensor> terminal_samples(
    const std::vector<TrajectoryResult>& results);
std::vector<TrajectoryLog> trajectory_logs(
    const std::vector<TrajectoryResult>& results);

}  // namespace epcfg
