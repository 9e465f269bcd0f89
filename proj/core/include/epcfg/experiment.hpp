#pragma once

#include <filesystem>

#include "epcfg/config.hpp"
#include "epcfg/guidance.hpp"

namespace epcfg {

struct SimulationOutputs {
  std::filesystem::path trace_csv;
  std::filesystem::path terminal_csv;
  std::filesystem::path summary_json;
};

// Offline guidance application: read a conditional/unconditional latent
// pair, run one guidance step, write the result, return the energy report.
EnergyReport run_transform(const std::filesystem::path& cond_path,
                           const std::filesystem::path& uncond_path,
                           const GuidanceParams& params,
                           const std::filesystem::path& out_path);

// Full batch experiment: sample cfg.batch guided trajectories and write
// trace.csv, terminal.csv and summary.json into cfg.out_dir. Byte-stable
// for a fixed seed.
SimulationOutputs run_simulation(const ExperimentConfig& cfg);

}  // namespace epcfg
