#include "epcfg/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace epcfg {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoFailure("write to " + path.string() + " failed");
}

constexpr char kTraceHeader[] = "step,mean_ratio,max_ratio,fallback_frac,mean_moment";

double parse_cell(const std::string& cell, const std::filesystem::path& path,
                  std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw MalformedCsv(path.string() + " line " + std::to_string(line) +
                       ": '" + cell + "' is not a number");
  return v;
}

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Palette shared by every chart; series cycle through it.
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path,
                     const TraceSummary& summary) {
  std::ostringstream out;
  out << kTraceHeader << "\n";
  for (std::size_t s = 0; s < summary.step.size(); ++s) {
    out << summary.step[s] << ',' << fmt17(summary.mean_ratio[s]) << ','
        << fmt17(summary.max_ratio[s]) << ','
        << fmt17(summary.fallback_fraction[s]) << ','
        << fmt17(summary.mean_moment[s]) << "\n";
  }
  write_text_file(path, out.str());
}

TraceSummary read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path.string() + " for reading");

  std::string line;
  if (!std::getline(in, line))
    throw MalformedCsv(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader)
    throw MalformedCsv(path.string() + ": unexpected header '" + line + "'");

  TraceSummary summary;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos
                                             ? std::string::npos
                                             : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 5)
      throw MalformedCsv(path.string() + " line " +
                         std::to_string(line_number) + ": expected 5 cells, got " +
                         std::to_string(cells.size()));
    summary.step.push_back(
        static_cast<int>(parse_cell(cells[0], path, line_number)));
    summary.mean_ratio.push_back(parse_cell(cells[1], path, line_number));
    summary.max_ratio.push_back(parse_cell(cells[2], path, line_number));
    summary.fallback_fraction.push_back(parse_cell(cells[3], path, line_number));
    summary.mean_moment.push_back(parse_cell(cells[4], path, line_number));
  }
  if (summary.step.empty())
    throw MalformedCsv(path.string() + ": no data rows");
  return summary;
}

void write_terminal_csv(const std::filesystem::path& path,
                        std::span<const LatentTensor> samples) {
  std::ostringstream out;
  const std::size_t d = samples.empty() ? 0 : samples[0].size();
  out << "index";
  for (std::size_t i = 0; i < d; ++i) out << ",dim" << i;
  out << "\n";
  for (std::size_t n = 0; n < samples.size(); ++n) {
    out << n;
    for (std::size_t i = 0; i < d; ++i) out << ',' << fmt17(samples[n][i]);
    out << "\n";
  }
  write_text_file(path, out.str());
}

std::string report_json(const EnergyReport& report) {
  nlohmann::json j;
  j["e_c"] = report.e_c;
  j["e_cfg"] = report.e_cfg;
  j["scale"] = report.scale;
  j["fallback_used"] = report.fallback_used;
  return j.dump();
}

void write_summary_json(const std::filesystem::path& path,
                        const ExperimentConfig& cfg,
                        const TraceSummary& trace,
                        const MomentStats& moments) {
  double ratio_sum = 0.0;
  double fallback_sum = 0.0;
  double ratio_max = trace.max_ratio.empty() ? 0.0 : trace.max_ratio[0];
  for (std::size_t s = 0; s < trace.step.size(); ++s) {
    ratio_sum += trace.mean_ratio[s];
    fallback_sum += trace.fallback_fraction[s];
    ratio_max = std::max(ratio_max, trace.max_ratio[s]);
  }
  const double steps = static_cast<double>(trace.step.size());

  nlohmann::json j;
  j["lambda"] = cfg.params.strength;
  j["mode"] = to_string(cfg.params.mode);
  j["guidance_space"] = to_string(cfg.space);
  j["window"] = {cfg.params.window.low, cfg.params.window.high};
  j["phi"] = cfg.params.phi;
  j["steps"] = cfg.steps;
  j["beta_min"] = cfg.beta_min;
  j["beta_max"] = cfg.beta_max;
  j["dim"] = cfg.dim;
  j["batch"] = cfg.batch;
  j["seed"] = cfg.seed;
  j["mean_ratio"] = ratio_sum / steps;
  j["max_ratio"] = ratio_max;
  j["fallback_fraction"] = fallback_sum / steps;
  j["terminal_mean"] = moments.mean;
  j["terminal_second_moment"] = moments.second_moment;
  write_text_file(path, j.dump(2) + "\n");
}

void emit_svg(const std::vector<std::filesystem::path>& trace_csvs,
              const std::filesystem::path& out_svg) {
  if (trace_csvs.empty()) throw MalformedCsv("no input traces");
  std::vector<Series> series;
  for (const auto& path : trace_csvs) {
    const TraceSummary t = read_trace_csv(path);
    Series s;
    s.name = path.stem().string();
    for (std::size_t i = 0; i < t.step.size(); ++i) {
      s.x.push_back(static_cast<double>(t.step[i]));
      s.y.push_back(t.mean_ratio[i]);
    }
    series.push_back(std::move(s));
  }

  double x_min = series[0].x[0], x_max = x_min;
  double y_min = series[0].y[0], y_max = y_min;
  for (const auto& s : series) {
    for (double v : s.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
    for (double v : s.y) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
  }
  if (x_min == x_max) { x_min -= 1.0; x_max += 1.0; }
  if (y_min == y_max) { y_min -= 0.5; y_max += 0.5; }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double width = 800.0, height = 480.0;
  const double left = 70.0, right = 20.0, top = 30.0, bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto sx = [&](double v) {
    return left + (v - x_min) / (x_max - x_min) * plot_w;
  };
  const auto sy = [&](double v) {
    return top + (1.0 - (v - y_min) / (y_max - y_min)) * plot_h;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
         "height=\"480\" viewBox=\"0 0 800 480\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"480\" fill=\"white\"/>\n";

  // axes and ticks
  svg << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(top + plot_h)
      << "\" x2=\"" << fmt2(left + plot_w) << "\" y2=\"" << fmt2(top + plot_h)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(top) << "\" x2=\""
      << fmt2(left) << "\" y2=\"" << fmt2(top + plot_h)
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 4.0;
    const double fy = y_min + (y_max - y_min) * i / 4.0;
    char label[32];
    std::snprintf(label, sizeof(label), "%.4g", fx);
    svg << "<text x=\"" << fmt2(sx(fx)) << "\" y=\"" << fmt2(top + plot_h + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << label
        << "</text>\n";
    std::snprintf(label, sizeof(label), "%.4g", fy);
    svg << "<text x=\"" << fmt2(left - 6) << "\" y=\"" << fmt2(sy(fy) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << fmt2(left + plot_w / 2) << "\" y=\""
      << fmt2(height - 12)
      << "\" font-size=\"13\" text-anchor=\"middle\">step</text>\n";
  svg << "<text x=\"16\" y=\"" << fmt2(top + plot_h / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt2(top + plot_h / 2) << ")\">mean energy ratio</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << fmt2(sx(series[k].x[i])) << ',' << fmt2(sy(series[k].y[i]));
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << fmt2(left + plot_w - 8) << "\" y=\""
        << fmt2(top + 16 + 16 * static_cast<double>(k))
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">"
        << xml_escape(series[k].name) << "</text>\n";
  }
  svg << "</svg>\n";
  write_text_file(out_svg, svg.str());
}

void emit_svg(const std::filesystem::path& trace_csv,
              const std::filesystem::path& out_svg) {
  emit_svg(std::vector<std::filesystem::path>{trace_csv}, out_svg);
}

}  // namespace epcfg
