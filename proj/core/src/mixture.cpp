#include "epcfg/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace epcfg {

namespace {

void check_observation(const MixtureModel& m, const LatentTensor& x_t,
                       double alpha_bar) {
  if (static_cast<std::int64_t>(x_t.size()) != m.dim())
    throw ShapeMismatch("observation has " + std::to_string(x_t.size()) +
                        " elements, mixture dimension is " +
                        std::to_string(m.dim()));
  if (!(alpha_bar > 0.0 && alpha_bar <= 1.0))
    throw DegenerateAlpha("alpha_bar must lie in (0,1], got " +
                          std::to_string(alpha_bar));
}

}  // namespace

MixtureModel MixtureModel::create(std::int64_t dim,
                                  std::vector<MixtureComponent> components) {
  if (dim < 1)
    throw InvalidMixture("mixture dimension must be >= 1, got " +
                         std::to_string(dim));
  if (components.empty())
    throw InvalidMixture("mixture needs at least one component");
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < components.size(); ++k) {
    const auto& c = components[k];
    if (!(std::isfinite(c.weight) && c.weight > 0.0))
      throw InvalidMixture("component " + std::to_string(k) +
                           " weight must be positive");
    if (!(std::isfinite(c.stddev) && c.stddev > 0.0))
      throw InvalidMixture("component " + std::to_string(k) +
                           " stddev must be positive");
    if (c.mean.size() != static_cast<std::size_t>(dim))
      throw InvalidMixture("component " + std::to_string(k) + " mean has " +
                           std::to_string(c.mean.size()) +
                           " entries, expected " + std::to_string(dim));
    for (double v : c.mean)
      if (!std::isfinite(v))
        throw InvalidMixture("component " + std::to_string(k) +
                             " mean is not finite");
    weight_sum += c.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12)
    throw InvalidMixture("component weights sum to " +
                         std::to_string(weight_sum) + ", expected 1");
  return MixtureModel(dim, std::move(components));
}

MixtureModel MixtureModel::single_gaussian(std::vector<double> mean,
                                           double stddev) {
  const auto dim = static_cast<std::int64_t>(mean.size());
  return create(dim, {MixtureComponent{1.0, std::move(mean), stddev}});
}

std::vector<double> posterior_responsibilities(const MixtureModel& m,
                                               const LatentTensor& x_t,
                                               double alpha_bar) {
  check_observation(m, x_t, alpha_bar);
  const double sqrt_ab = std::sqrt(alpha_bar);
  const double d = static_cast<double>(m.dim());
  const auto& comps = m.components();

  std::vector<double> log_r(comps.size());
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& c = comps[k];
    // Marginal of x_t under component k:
    //   N(sqrt_ab * mean, (alpha_bar * stddev^2 + 1 - alpha_bar) * I)
    const double var = alpha_bar * c.stddev * c.stddev + (1.0 - alpha_bar);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < x_t.size(); ++i) {
      const double diff = x_t[i] - sqrt_ab * c.mean[i];
      dist2 += diff * diff;
    }
    log_r[k] = std::log(c.weight) -
               0.5 * d * std::log(2.0 * std::numbers::pi * var) -
               0.5 * dist2 / var;
  }

  const double peak = *std::max_element(log_r.begin(), log_r.end());
  double total = 0.0;
  for (double& lr : log_r) {
    lr = std::exp(lr - peak);
    total += lr;
  }
  for (double& r : log_r) r /= total;
  return log_r;
}

LatentTensor analytic_x0(const MixtureModel& m, const LatentTensor& x_t,
                         double alpha_bar) {
  const std::vector<double> resp = posterior_responsibilities(m, x_t, alpha_bar);
  const double sqrt_ab = std::sqrt(alpha_bar);
  const auto& comps = m.components();

  std::vector<double> out(x_t.size(), 0.0);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& c = comps[k];
    const double var = alpha_bar * c.stddev * c.stddev + (1.0 - alpha_bar);
    const double gain = sqrt_ab * c.stddev * c.stddev / var;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double cond_mean = c.mean[i] + gain * (x_t[i] - sqrt_ab * c.mean[i]);
      out[i] += resp[k] * cond_mean;
    }
  }
  return LatentTensor::create(x_t.shape(), std::move(out));
}

LatentTensor sample_mixture(const MixtureModel& m, Rng& rng) {
  const auto& comps = m.components();
  const double u = rng.uniform01();
  std::size_t pick = comps.size() - 1;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    cumulative += comps[k].weight;
    if (u < cumulative) {
      pick = k;
      break;
    }
  }
  const auto& c = comps[pick];
  std::vector<double> out(c.mean.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = c.mean[i] + c.stddev * rng.normal();
  return LatentTensor::create({m.dim()}, std::move(out));
}

}  // namespace epcfg
