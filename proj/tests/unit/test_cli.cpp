// Integration tests that drive the built binary end to end.

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "epcfg/latent_io.hpp"
#include "epcfg/report.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace epcfg;
using epcfg_test::bitwise_equal;
using epcfg_test::TempDir;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args, const TempDir& dir,
                  const std::string& env = "") {
  const auto out_path = dir.path() / "stdout.txt";
  const auto err_path = dir.path() / "stderr.txt";
  const std::string command = env + (env.empty() ? "" : " ") + EPCFG_CLI_PATH +
                              " " + args + " > " + out_path.string() + " 2> " +
                              err_path.string();
  const int status = std::system(command.c_str());

  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  return {WEXITSTATUS(status), slurp(out_path), slurp(err_path)};
}

std::string slurp_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_config(const std::filesystem::path& path,
                  const std::filesystem::path& out_dir, double lambda,
                  const std::string& mode, std::uint64_t seed) {
  std::ofstream out(path);
  out << "lambda = " << lambda << "\n"
      << "mode = " << mode << "\n"
      << "steps = 6\n"
      << "dim = 1\n"
      << "cond = 1 2 0.5\n"
      << "uncond = 0.5 2 0.5\n"
      << "uncond = 0.5 -2 0.5\n"
      << "batch = 4\n"
      << "seed = " << seed << "\n"
      << "out_dir = " << out_dir.string() << "\n";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("transform at strength one copies the conditional payload") {
  TempDir dir("cli");
  const auto cond = dir.path() / "cond.epl";
  const auto uncond = dir.path() / "uncond.epl";
  const auto out = dir.path() / "out.epl";
  write_latent(cond, make_latent({3}, {0.25, -1.5, 2.0}));
  write_latent(uncond, make_latent({3}, {4.0, 4.0, 4.0}));

  const CliResult r = run_cli("transform --cond " + cond.string() +
                                  " --uncond " + uncond.string() + " --out " +
                                  out.string() + " --lambda 1 --mode ep",
                              dir);
  CHECK(r.exit_code == 0);
  CHECK(slurp_file(out) == slurp_file(cond));

  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["scale"] == 1.0);
}

TEST_CASE("transform reports the energy-matching scale") {
  TempDir dir("cli");
  const auto cond = dir.path() / "cond.epl";
  const auto uncond = dir.path() / "uncond.epl";
  const auto out = dir.path() / "out.epl";
  write_latent(cond, make_latent({2}, {3.0, 4.0}));
  write_latent(uncond, make_latent({2}, {0.0, 0.0}));

  const CliResult r = run_cli(
      "transform --cond " + cond.string() + " --uncond " + uncond.string() +
          " --out " + out.string() + " --lambda 2 --mode ep --l 0 --h 100",
      dir);
  CHECK(r.exit_code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["e_c"] == 25.0);
  CHECK(report["e_cfg"] == 100.0);
  CHECK(report["scale"] == 0.5);
  CHECK(report["fallback_used"] == false);
  CHECK(bitwise_equal(read_latent(out), make_latent({2}, {3.0, 4.0})));
}

TEST_CASE("plain then rescale equals the one-shot energy-preserving mode") {
  TempDir dir("cli");
  const auto cond = dir.path() / "a.epl";
  const auto uncond = dir.path() / "b.epl";
  write_latent(cond, make_latent({4}, {3.0, 4.0, -2.0, 7.0}));
  write_latent(uncond, make_latent({4}, {1.0, 1.0, 1.0, 1.0}));

  // one-shot
  const auto oneshot = dir.path() / "oneshot.epl";
  CHECK(run_cli("transform --cond " + cond.string() + " --uncond " +
                    uncond.string() + " --out " + oneshot.string() +
                    " --lambda 3 --mode ep",
                dir)
            .exit_code == 0);

  // plain combination first
  const auto combined = dir.path() / "combined.epl";
  CHECK(run_cli("transform --cond " + cond.string() + " --uncond " +
                    uncond.string() + " --out " + combined.string() +
                    " --lambda 3 --mode plain",
                dir)
            .exit_code == 0);

  // then a pure rescale pass: with mirror = 2*cond - combined as the
  // unconditional input, lambda 2 reproduces `combined` before rescaling
  const LatentTensor a = read_latent(cond);
  const LatentTensor c = read_latent(combined);
  std::vector<double> mirror_data(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    mirror_data[i] = 2.0 * a[i] - c[i];
  const auto mirror = dir.path() / "mirror.epl";
  write_latent(mirror, make_latent(a.shape(), std::move(mirror_data)));

  const auto composed = dir.path() / "composed.epl";
  CHECK(run_cli("transform --cond " + cond.string() + " --uncond " +
                    mirror.string() + " --out " + composed.string() +
                    " --lambda 2 --mode ep",
                dir)
            .exit_code == 0);

  CHECK(slurp_file(composed) == slurp_file(oneshot));
}

TEST_CASE("transform failures exit nonzero with a diagnostic") {
  TempDir dir("cli");
  const auto cond = dir.path() / "c.epl";
  const auto uncond = dir.path() / "u.epl";
  write_latent(cond, make_latent({2}, {1.0, 2.0}));
  write_latent(uncond, make_latent({3}, {1.0, 2.0, 3.0}));

  const CliResult shape = run_cli("transform --cond " + cond.string() +
                                      " --uncond " + uncond.string() +
                                      " --out " + (dir.path() / "o.epl").string() +
                                      " --lambda 2 --mode ep",
                                  dir);
  CHECK(shape.exit_code != 0);
  CHECK(shape.err.find("error:") != std::string::npos);

  const CliResult missing = run_cli("transform --cond " + cond.string() +
                                        " --lambda 2 --mode ep",
                                    dir);
  CHECK(missing.exit_code != 0);
}

TEST_CASE("simulate is deterministic and honours EPCFG_SEED") {
  TempDir dir("cli");
  const auto cfg = dir.path() / "exp.cfg";
  const auto out1 = dir.path() / "run1";
  const auto out2 = dir.path() / "run2";

  write_config(cfg, out1, 9.0, "ep", 7);
  CHECK(run_cli("simulate --config " + cfg.string(), dir).exit_code == 0);
  write_config(cfg, out2, 9.0, "ep", 7);
  CHECK(run_cli("simulate --config " + cfg.string(), dir).exit_code == 0);

  CHECK(slurp_file(out1 / "trace.csv") == slurp_file(out2 / "trace.csv"));
  CHECK(slurp_file(out1 / "terminal.csv") == slurp_file(out2 / "terminal.csv"));
  CHECK(slurp_file(out1 / "summary.json") == slurp_file(out2 / "summary.json"));

  // the written trace witnesses energy preservation end to end
  const TraceSummary trace = read_trace_csv(out1 / "trace.csv");
  REQUIRE(trace.step.size() == 6);
  for (std::size_t s = 0; s < trace.step.size(); ++s) {
    if (trace.fallback_fraction[s] > 0.0) continue;
    CHECK(std::abs(trace.mean_ratio[s] - 1.0) < 1e-6);
  }

  // the summary parses and echoes the run parameters
  std::ifstream summary_in(out1 / "summary.json");
  const auto summary = nlohmann::json::parse(summary_in);
  CHECK(summary["lambda"] == 9.0);
  CHECK(summary["mode"] == "ep");
  CHECK(summary["batch"] == 4);
  CHECK(summary["terminal_mean"].size() == 1);

  // env override replaces the configured seed
  const auto out3 = dir.path() / "run3";
  write_config(cfg, out3, 9.0, "ep", 7);
  CHECK(run_cli("simulate --config " + cfg.string(), dir, "EPCFG_SEED=99")
            .exit_code == 0);
  CHECK(slurp_file(out3 / "terminal.csv") != slurp_file(out1 / "terminal.csv"));

  const auto out4 = dir.path() / "run4";
  write_config(cfg, out4, 9.0, "ep", 99);
  CHECK(run_cli("simulate --config " + cfg.string(), dir).exit_code == 0);
  CHECK(slurp_file(out4 / "terminal.csv") == slurp_file(out3 / "terminal.csv"));
}

TEST_CASE("a strength sweep produces one output set per level") {
  TempDir dir("cli");
  for (double lambda : {1.0, 5.0, 9.0, 12.0}) {
    const auto cfg = dir.path() / "sweep.cfg";
    const auto out = dir.path() / ("lambda" + std::to_string(int(lambda)));
    write_config(cfg, out, lambda, "ep", 3);
    CHECK(run_cli("simulate --config " + cfg.string(), dir).exit_code == 0);
    CHECK(std::filesystem::exists(out / "trace.csv"));
    CHECK(std::filesystem::exists(out / "terminal.csv"));
    CHECK(std::filesystem::exists(out / "summary.json"));
  }
}

TEST_CASE("plot renders simulate traces") {
  TempDir dir("cli");
  const auto cfg = dir.path() / "exp.cfg";
  const auto out = dir.path() / "run";
  write_config(cfg, out, 5.0, "plain", 11);
  CHECK(run_cli("simulate --config " + cfg.string(), dir).exit_code == 0);

  const auto svg = dir.path() / "ratio.svg";
  CHECK(run_cli("plot --in " + (out / "trace.csv").string() + " --out " +
                    svg.string(),
                dir)
            .exit_code == 0);
  const std::string content = slurp_file(svg);
  CHECK(content.rfind("<?xml", 0) == 0);
  CHECK(content.find("</svg>") != std::string::npos);

  const CliResult bad = run_cli(
      "plot --in " + cfg.string() + " --out " + svg.string(), dir);
  CHECK(bad.exit_code != 0);
}

}  // TEST_SUITE
