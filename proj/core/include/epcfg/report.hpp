#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "epcfg/config.hpp"
#include "epcfg/guidance.hpp"
#include "epcfg/metrics.hpp"

namespace epcfg {

// Trace CSV schema: step,mean_ratio,max_ratio,fallback_frac,mean_moment.
// Floating-point cells are printed with 17 significant digits so reruns are
// byte-stable and values round-trip exactly.
void write_trace_csv(const std::filesystem::path& path,
                     const TraceSummary& summary);
TraceSummary read_trace_csv(const std::filesystem::path& path);

// Terminal-sample CSV schema: index,dim0,...,dim{d-1}.
void write_terminal_csv(const std::filesystem::path& path,
                        std::span<const LatentTensor> samples);

// One-line JSON report for a guidance application.
std::string report_json(const EnergyReport& report);

void write_summary_json(const std::filesystem::path& path,
                        const ExperimentConfig& cfg,
                        const TraceSummary& trace, const MomentStats& moments);

// Standalone SVG line chart of mean_ratio against step, one polyline per
// input trace CSV.
void emit_svg(const std::vector<std::filesystem::path>& trace_csvs,
              const std::filesystem::path& out_svg);
void emit_svg(const std::filesystem::path& trace_csv,
              const std::filesystem::path& out_svg);

}  // namespace epcfg
