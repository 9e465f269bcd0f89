#pragma once

#include <cstdint>
#include <vector>

#include "epcfg/latent.hpp"
#include "epcfg/rng.hpp"

namespace epcfg {

struct MixtureComponent {
  double weight = 1.0;
  std::vector<double> mean;
  double stddev = 1.0;  // isotropic
};

// Weighted isotropic Gaussian mixture over R^dim. Serves as the toy data
// distribution behind the conditional / unconditional denoisers.
class MixtureModel {
 public:
  // Throws InvalidMixture unless dim >= 1, every component has a positive
  // weight and stddev and a dim-length finite mean, and the weights sum to
  // 1 within 1e-12.
  static MixtureModel create(std::int64_t dim,
                             std::vector<MixtureComponent> components);

  static MixtureModel single_gaussian(std::vector<double> mean, double stddev);

  std::int64_t dim() const noexcept { return dim_; }
  const std::vector<MixtureComponent>& components() const noexcept {
    return components_;
  }

 private:
  MixtureModel(std::int64_t dim, std::vector<MixtureComponent> components)
      : dim_(dim), components_(std::move(components)) {}

  std::int64_t dim_;
  std::vector<MixtureComponent> components_;
};

// Posterior component probabilities given a noisy observation
// x_t = sqrt(alpha_bar) * x0 + sqrt(1 - alpha_bar) * noise. Computed in log
// space; the returned weights sum to 1.
std::vector<double> posterior_responsibilities(const MixtureModel& m,
                                               const LatentTensor& x_t,
                                               double alpha_bar);

// Exact posterior mean E[x0 | x_t] under the mixture prior. alpha_bar must
// lie in (0, 1]; at alpha_bar == 1 the result is x_t itself.
LatentTensor analytic_x0(const MixtureModel& m, const LatentTensor& x_t,
                         double alpha_bar);

// One draw from the mixture itself (ground-truth sampling).
LatentTensor sample_mixture(const MixtureModel& m, Rng& rng);

}  // namespace epcfg
