#include "epcfg/guidance.hpp"

#include <cmath>
#include <string>

namespace epcfg {

namespace {

void require_same_shape(const LatentTensor& a, const LatentTensor& b,
                        const char* what) {
  if (!a.same_shape(b))
    throw ShapeMismatch(std::string(what) + ": operand shapes differ");
}

double population_std(const LatentTensor& x) {
  const auto values = x.data();
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) {
    const double d = v - mean;
    var += d * d;
  }
  return std::sqrt(var / n);
}

// Ratio sigma_c / sigma_cfg, or degenerate=true when sigma_cfg vanishes.
struct StdRatio {
  double value = 1.0;
  bool degenerate = false;
};

StdRatio std_ratio(const LatentTensor& x_cfg, const LatentTensor& x_c) {
  const double sigma_cfg = population_std(x_cfg);
  if (sigma_cfg <= kDegenerateEnergy) return {1.0, true};
  return {population_std(x_c) / sigma_cfg, false};
}

}  // namespace

const char* to_string(GuidanceMode mode) noexcept {
  switch (mode) {
    case GuidanceMode::Plain:
      return "plain";
    case GuidanceMode::EnergyPreserving:
      return "ep";
    case GuidanceMode::StdRescale:
      return "std";
  }
  return "?";
}

GuidanceMode guidance_mode_from_string(std::string_view name) {
  if (name == "plain") return GuidanceMode::Plain;
  if (name == "ep") return GuidanceMode::EnergyPreserving;
  if (name == "std") return GuidanceMode::StdRescale;
  throw Error("unknown guidance mode '" + std::string(name) +
              "' (expected plain|ep|std)");
}

void GuidanceParams::validate() const {
  if (!std::isfinite(strength) || strength < 1.0)
    throw InvalidStrength("guidance strength must be >= 1, got " +
                          std::to_string(strength));
  window.validate();
  if (!(phi >= 0.0 && phi <= 1.0))
    throw InvalidPhi("phi must lie in [0,1], got " + std::to_string(phi));
}

LatentTensor cfg_combine(const LatentTensor& x_c, const LatentTensor& x_u,
                         double strength) {
  if (!std::isfinite(strength) || strength < 1.0)
    throw InvalidStrength("guidance strength must be >= 1, got " +
                          std::to_string(strength));
  require_same_shape(x_c, x_u, "cfg_combine");
  if (strength == 1.0) return x_c;  // exact identity, bitwise

  const double weight = strength - 1.0;
  std::vector<double> out(x_c.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = x_c[i] + weight * (x_c[i] - x_u[i]);
    if (!std::isfinite(v))
      throw NonFiniteResult("combined prediction overflowed at element " +
                            std::to_string(i));
    out[i] = v;
  }
  return LatentTensor::create(x_c.shape(), std::move(out));
}

GuidedResult ep_rescale(const LatentTensor& x_cfg, const LatentTensor& x_c,
                        const RobustWindow& w) {
  require_same_shape(x_cfg, x_c, "ep_rescale");
  const RobustEnergyResult rc = robust_energy(x_c, w);
  const RobustEnergyResult rg = robust_energy(x_cfg, w);
  if (!std::isfinite(rc.energy) || !std::isfinite(rg.energy))
    throw NonFiniteResult("robust energy overflowed");

  EnergyReport report;
  report.e_c = rc.energy;
  report.e_cfg = rg.energy;
  report.window_c = {rc.p_low, rc.p_high};
  report.window_cfg = {rg.p_low, rg.p_high};

  if (rg.energy <= kDegenerateEnergy || rc.energy <= kDegenerateEnergy) {
    report.scale = 1.0;
    report.fallback_used = true;
    return {x_cfg, report};
  }

  report.scale = std::sqrt(rc.energy / rg.energy);
  std::vector<double> out(x_cfg.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = report.scale * x_cfg[i];
    if (!std::isfinite(v))
      throw NonFiniteResult("rescaled prediction overflowed at element " +
                            std::to_string(i));
    out[i] = v;
  }
  return {LatentTensor::create(x_cfg.shape(), std::move(out)), report};
}

LatentTensor std_rescale_baseline(const LatentTensor& x_cfg,
                                  const LatentTensor& x_c, double phi) {
  if (!(phi >= 0.0 && phi <= 1.0))
    throw InvalidPhi("phi must lie in [0,1], got " + std::to_string(phi));
  require_same_shape(x_cfg, x_c, "std_rescale_baseline");
  if (phi == 0.0) return x_cfg;

  const StdRatio ratio = std_ratio(x_cfg, x_c);
  if (ratio.degenerate || ratio.value == 1.0) return x_cfg;

  std::vector<double> out(x_cfg.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double rescaled = ratio.value * x_cfg[i];
    const double v = phi * rescaled + (1.0 - phi) * x_cfg[i];
    if (!std::isfinite(v))
      throw NonFiniteResult("std-rescaled prediction overflowed at element " +
                            std::to_string(i));
    out[i] = v;
  }
  return LatentTensor::create(x_cfg.shape(), std::move(out));
}

GuidedResult ep_cfg(const LatentTensor& x_c, const LatentTensor& x_u,
                    const GuidanceParams& params) {
  params.validate();
  LatentTensor x_cfg = cfg_combine(x_c, x_u, params.strength);

  if (params.mode == GuidanceMode::EnergyPreserving)
    return ep_rescale(x_cfg, x_c, params.window);

  // Plain and StdRescale still measure both robust energies so trajectory
  // instrumentation can compare modes.
  const RobustEnergyResult rc = robust_energy(x_c, params.window);
  const RobustEnergyResult rg = robust_energy(x_cfg, params.window);
  EnergyReport report;
  report.e_c = rc.energy;
  report.e_cfg = rg.energy;
  report.window_c = {rc.p_low, rc.p_high};
  report.window_cfg = {rg.p_low, rg.p_high};

  if (params.mode == GuidanceMode::Plain) {
    report.scale = 1.0;
    return {std::move(x_cfg), report};
  }

  const StdRatio ratio = std_ratio(x_cfg, x_c);
  LatentTensor out = std_rescale_baseline(x_cfg, x_c, params.phi);
  if (ratio.degenerate) {
    report.scale = 1.0;
    report.fallback_used = true;
  } else {
    // Effective multiplier of the interpolated output.
    report.scale = params.phi * ratio.value + (1.0 - params.phi);
  }
  return {std::move(out), report};
}

}  // namespace epcfg
