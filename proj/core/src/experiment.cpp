#include "epcfg/experiment.hpp"

#include "epcfg/latent_io.hpp"
#include "epcfg/metrics.hpp"
#include "epcfg/report.hpp"
#include "epcfg/sampler.hpp"
#include "epcfg/schedule.hpp"

namespace epcfg {

EnergyReport run_transform(const std::filesystem::path& cond_path,
                           const std::filesystem::path& uncond_path,
                           const GuidanceParams& params,
                           const std::filesystem::path& out_path) {
  const LatentTensor x_c = read_latent(cond_path);
  const LatentTensor x_u = read_latent(uncond_path);
  GuidedResult result = ep_cfg(x_c, x_u, params);
  write_latent(out_path, result.output);
  return result.report;
}

SimulationOutputs run_simulation(const ExperimentConfig& cfg) {
  const MixtureModel cond = cfg.cond_model();
  const MixtureModel uncond = cfg.uncond_model();
  const DiffusionSchedule sched =
      vp_schedule(cfg.steps, cfg.beta_min, cfg.beta_max);

  const std::vector<TrajectoryResult> results =
      run_batch(cond, uncond, sched, cfg.params, cfg.space, cfg.seed,
                cfg.batch, cfg.threads);
  const std::vector<TrajectoryLog> logs = trajectory_logs(results);
  const std::vector<LatentTensor> samples = terminal_samples(results);

  const TraceSummary trace = trace_summary(logs);
  const MomentStats moments = moment_stats(samples);

  std::filesystem::create_directories(cfg.out_dir);
  SimulationOutputs outputs{cfg.out_dir / "trace.csv",
                            cfg.out_dir / "terminal.csv",
                            cfg.out_dir / "summary.json"};
  write_trace_csv(outputs.trace_csv, trace);
  write_terminal_csv(outputs.terminal_csv, samples);
  write_summary_json(outputs.summary_json, cfg, trace, moments);
  return outputs;
}

}  // namespace epcfg
