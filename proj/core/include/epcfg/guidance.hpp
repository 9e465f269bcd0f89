#pragma once

#include <string_view>
#include <utility>

#include "epcfg/latent.hpp"

namespace epcfg {

// Robust-energy denominators below this threshold are treated as degenerate
// and the rescale step passes the input through unchanged.
inline constexpr double kDegenerateEnergy = 1e-30;

enum class GuidanceMode {
  Plain,             // combined prediction, no correction
  EnergyPreserving,  // rescale the combined prediction to the conditional's robust energy
  StdRescale,        // standard-deviation rescale + interpolation baseline
};

const char* to_string(GuidanceMode mode) noexcept;
GuidanceMode guidance_mode_from_string(std::string_view name);  // "plain" | "ep" | "std"

struct GuidanceParams {
  double strength = 1.0;  // guidance weight, must be >= 1
  GuidanceMode mode = GuidanceMode::EnergyPreserving;
  RobustWindow window{};  // robust-energy window
  double phi = 0.7;       // StdRescale interpolation weight, in [0,1]

  // Throws InvalidStrength / InvalidWindow / InvalidPhi.
  void validate() const;
};

// Robust energies of the conditional and combined predictions, the window
// bounds they were measured in, and the scalar actually applied to the
// combined prediction. For EnergyPreserving outputs without fallback,
// scale^2 * e_cfg == e_c up to rounding.
struct EnergyReport {
  double e_c = 0.0;
  double e_cfg = 0.0;
  double scale = 1.0;
  std::pair<double, double> window_c{0.0, 0.0};
  std::pair<double, double> window_cfg{0.0, 0.0};
  bool fallback_used = false;
};

struct GuidedResult {
  LatentTensor output;
  EnergyReport report;
};

// Combined prediction x_c + (strength - 1) * (x_c - x_u). strength == 1
// returns x_c unchanged. Throws ShapeMismatch, InvalidStrength, and
// NonFiniteResult if the combination overflows.
LatentTensor cfg_combine(const LatentTensor& x_c, const LatentTensor& x_u,
                         double strength);

// Rescales x_cfg by sqrt(E_c / E_cfg) of the robust energies so its robust
// energy matches the conditional prediction's. Degenerate energies (either
// side <= kDegenerateEnergy) pass x_cfg through with scale 1 and
// fallback_used set.
GuidedResult ep_rescale(const LatentTensor& x_cfg, const LatentTensor& x_c,
                        const RobustWindow& w = {});

// Full guidance step: combine, then apply the correction selected by
// params.mode. The report always carries both robust energies, whatever the
// mode.
GuidedResult ep_cfg(const LatentTensor& x_c, const LatentTensor& x_u,
                    const GuidanceParams& params);

// Comparison baseline: match population standard deviation instead of
// energy, then interpolate the rescaled prediction with the original:
//   phi * (sigma_c / sigma_cfg) * x_cfg + (1 - phi) * x_cfg.
// phi == 0, a degenerate sigma_cfg, or a ratio of exactly 1 leave x_cfg
// unchanged.
LatentTensor std_rescale_baseline(const LatentTensor& x_cfg,
                                  const LatentTensor& x_c, double phi);

}  // namespace epcfg
