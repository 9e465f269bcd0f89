#include "epcfg/sampler.hpp"

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <thread>

namespace epcfg {

namespace {

void require_same_shape(const LatentTensor& a, const LatentTensor& b,
                        const char* what) {
  if (!a.same_shape(b))
    throw ShapeMismatch(std::string(what) + ": operand shapes differ");
}

}  // namespace

const char* to_string(GuidanceSpace space) noexcept {
  return space == GuidanceSpace::Epsilon ? "epsilon" : "x0";
}

GuidanceSpace guidance_space_from_string(std::string_view name) {
  if (name == "epsilon") return GuidanceSpace::Epsilon;
  if (name == "x0") return GuidanceSpace::X0;
  throw Error("unknown guidance space '" + std::string(name) +
              "' (expected epsilon|x0)");
}

LatentTensor eps_from_x0(const LatentTensor& x_t, const LatentTensor& x0,
                         double alpha_bar) {
  require_same_shape(x_t, x0, "eps_from_x0");
  if (!(alpha_bar > 0.0 && alpha_bar < 1.0))
    throw DegenerateAlpha("eps_from_x0 needs alpha_bar in (0,1), got " +
                          std::to_string(alpha_bar));
  const double signal = std::sqrt(alpha_bar);
  const double noise = std::sqrt(1.0 - alpha_bar);
  std::vector<double> out(x_t.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (x_t[i] - signal * x0[i]) / noise;
  return LatentTensor::create(x_t.shape(), std::move(out));
}

LatentTensor x0_from_eps(const LatentTensor& x_t, const LatentTensor& eps,
                         double alpha_bar) {
  require_same_shape(x_t, eps, "x0_from_eps");
  if (!(alpha_bar > 0.0 && alpha_bar <= 1.0))
    throw DegenerateAlpha("x0_from_eps needs alpha_bar in (0,1], got " +
                          std::to_string(alpha_bar));
  const double signal = std::sqrt(alpha_bar);
  const double noise = std::sqrt(1.0 - alpha_bar);
  std::vector<double> out(x_t.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (x_t[i] - noise * eps[i]) / signal;
  return LatentTensor::create(x_t.shape(), std::move(out));
}

LatentTensor ddim_step(const LatentTensor& x_t, const LatentTensor& x0_pred,
                       const DiffusionSchedule& sched, int t) {
  if (t < 1 || t > sched.steps())
    throw IndexOutOfRange("ddim_step at t=" + std::to_string(t) +
                          " outside [1, " + std::to_string(sched.steps()) +
                          "]");
  require_same_shape(x_t, x0_pred, "ddim_step");
  const LatentTensor eps = eps_from_x0(x_t, x0_pred, sched.alpha_bar(t));
  const double prev = sched.alpha_bar(t - 1);
  const double signal = std::sqrt(prev);
  const double noise = std::sqrt(1.0 - prev);
  std::vector<double> out(x_t.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = signal * x0_pred[i] + noise * eps[i];
  return LatentTensor::create(x_t.shape(), std::move(out));
}

TrajectoryResult sample_trajectory(const MixtureModel& cond,
                                   const MixtureModel& uncond,
                                   const DiffusionSchedule& sched,
                                   const GuidanceParams& params,
                                   GuidanceSpace space, std::uint64_t seed) {
  if (cond.dim() != uncond.dim())
    throw ShapeMismatch("conditional and unconditional mixtures disagree on "
                        "dimension");
  params.validate();

  const auto d = cond.dim();
  Rng rng(seed);
  std::vector<double> init(static_cast<std::size_t>(d));
  for (double& v : init) v = rng.normal();
  LatentTensor x = LatentTensor::create({d}, std::move(init));

  TrajectoryLog log;
  log.reserve(static_cast<std::size_t>(sched.steps()));

  for (int t = sched.steps(); t >= 1; --t) {
    const double ab = sched.alpha_bar(t);
    const LatentTensor x0_c = analytic_x0(cond, x, ab);
    const LatentTensor x0_u = analytic_x0(uncond, x, ab);

    GuidedResult guided =
        space == GuidanceSpace::Epsilon
            ? ep_cfg(eps_from_x0(x, x0_c, ab), eps_from_x0(x, x0_u, ab), params)
            : ep_cfg(x0_c, x0_u, params);

    const double applied_energy =
        robust_energy(guided.output, params.window).energy;
    log.push_back({t, guided.report.e_c, applied_energy, guided.report.scale,
                   guided.report.fallback_used,
                   energy(x) / static_cast<double>(d)});

    const LatentTensor x0_guided = space == GuidanceSpace::Epsilon
                                       ? x0_from_eps(x, guided.output, ab)
                                       : std::move(guided.output);
    x = ddim_step(x, x0_guided, sched, t);
  }
  return {std::move(x), std::move(log)};
}

std::vector<TrajectoryResult> run_batch(const MixtureModel& cond,
                                        const MixtureModel& uncond,
                                        const DiffusionSchedule& sched,
                                        const GuidanceParams& params,
                                        GuidanceSpace space,
                                        std::uint64_t base_seed, int count,
                                        int threads) {
  if (count < 1)
    throw EmptyBatch("batch size must be >= 1, got " + std::to_string(count));

  unsigned worker_count =
      threads > 0 ? static_cast<unsigned>(threads)
                  : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  worker_count = std::min(worker_count, static_cast<unsigned>(count));

  std::vector<std::optional<TrajectoryResult>> slots(
      static_cast<std::size_t>(count));
  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      slots[static_cast<std::size_t>(i)].emplace(sample_trajectory(
          cond, uncond, sched, params, space,
          substream_seed(base_seed, static_cast<std::uint64_t>(i))));
  };

  if (worker_count <= 1) {
    work(0, count);
  } else {
    const int chunk = (count + static_cast<int>(worker_count) - 1) /
                      static_cast<int>(worker_count);
    std::vector<std::future<void>> futures;
    for (int begin = 0; begin < count; begin += chunk)
      futures.push_back(std::async(std::launch::async, work, begin,
                                   std::min(begin + chunk, count)));
    for (auto& f : futures) f.get();
  }

  std::vector<TrajectoryResult> results;
  results.reserve(slots.size());
  for (auto& s : slots) results.push_back(std::move(*s));
  return results;
}

std::vector<LatentTensor> terminal_samples(
    const std::vector<TrajectoryResult>& results) {
  std::vector<LatentTensor> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back(r.sample);
  return out;
}

std::vector<TrajectoryLog> trajectory_logs(
    const std::vector<TrajectoryResult>& results) {
  std::vector<TrajectoryLog> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back(r.log);
  return out;
}

}  // namespace epcfg
