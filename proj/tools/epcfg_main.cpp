// Command line front end: offline guidance transforms, batch toy-diffusion
// experiments, and SVG charts from trace CSVs.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "epcfg/epcfg.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"energy-preserving classifier-free guidance toolkit"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");

  // --- transform ---
  auto* transform =
      app.add_subcommand("transform", "apply one guidance step to a latent pair");
  transform->set_help_flag("--help", "print help and exit");  // frees --h
  std::string cond_path, uncond_path, out_path, mode = "ep";
  double lambda = 1.0, low = 45.0, high = 55.0, phi = 0.7;
  transform->add_option("--cond", cond_path, "conditional latent (EPL1 file)")
      ->required();
  transform->add_option("--uncond", uncond_path, "unconditional latent (EPL1 file)")
      ->required();
  transform->add_option("--out", out_path, "output latent path")->required();
  transform->add_option("--lambda", lambda, "guidance strength (>= 1)")
      ->required();
  transform->add_option("--mode", mode, "guidance mode: plain|ep|std")
      ->required();
  transform->add_option("--l", low, "robust window lower percentile");
  transform->add_option("--h", high, "robust window upper percentile");
  transform->add_option("--phi", phi, "std-rescale interpolation weight");
  transform->callback([&] {
    epcfg::GuidanceParams params;
    params.strength = lambda;
    params.mode = epcfg::guidance_mode_from_string(mode);
    params.window = {low, high};
    params.phi = phi;
    const epcfg::EnergyReport report =
        epcfg::run_transform(cond_path, uncond_path, params, out_path);
    std::cout << epcfg::report_json(report) << "\n";
  });

  // --- simulate ---
  auto* simulate =
      app.add_subcommand("simulate", "run a batch toy-diffusion experiment");
  std::string config_path;
  simulate->add_option("--config", config_path, "experiment config file")
      ->required();
  simulate->callback([&] {
    epcfg::ExperimentConfig cfg = epcfg::load_config(config_path);
    if (const auto seed = epcfg::env_seed_override()) cfg.seed = *seed;
    const epcfg::SimulationOutputs outputs = epcfg::run_simulation(cfg);
    std::cout << outputs.trace_csv.string() << "\n"
              << outputs.terminal_csv.string() << "\n"
              << outputs.summary_json.string() << "\n";
  });

  // --- plot ---
  auto* plot = app.add_subcommand("plot", "render trace CSVs as an SVG chart");
  std::vector<std::string> inputs;
  std::string svg_path;
  plot->add_option("--in", inputs, "trace CSV input (repeatable)")->required();
  plot->add_option("--out", svg_path, "output SVG path")->required();
  plot->callback([&] {
    std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    epcfg::emit_svg(paths, svg_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
