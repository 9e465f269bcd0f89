#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "epcfg/guidance.hpp"
#include "epcfg/mixture.hpp"
#include "epcfg/sampler.hpp"

namespace epcfg {

// Experiment description for the simulate command. Parsed from a plain
// key=value file, one key per line, '#' comments; unknown keys are
// rejected. Mixture components repeat the cond/uncond keys, one component
// per line: weight, `dim` mean entries, stddev.
struct ExperimentConfig {
  GuidanceParams params;
  GuidanceSpace space = GuidanceSpace::Epsilon;
  int steps = 50;
  double beta_min = 1e-4;
  double beta_max = 0.2;
  std::int64_t dim = 1;
  std::vector<MixtureComponent> cond;
  std::vector<MixtureComponent> uncond;
  int batch = 1;
  std::uint64_t seed = 0;
  int threads = 0;
  std::filesystem::path out_dir;

  MixtureModel cond_model() const;
  MixtureModel uncond_model() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Value of EPCFG_SEED when set (overrides the config seed in the CLI).
// Throws MalformedConfig if the variable is set but not a valid uint64.
std::optional<std::uint64_t> env_seed_override();

}  // namespace epcfg
