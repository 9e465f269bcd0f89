#include "epcfg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace epcfg {

namespace {

void check_uniform_shape(std::span<const LatentTensor> samples,
                         const char* what) {
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!samples[i].same_shape(samples[0]))
      throw ShapeMismatch(std::string(what) + ": sample " + std::to_string(i) +
                          " has a different shape");
}

double euclidean(const LatentTensor& a, const LatentTensor& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double mean_pairwise(std::span<const LatentTensor> a,
                     std::span<const LatentTensor> b) {
  double sum = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) sum += euclidean(x, y);
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

// Deterministic ordering of sample sets (size, then lexicographic on the
// flattened data) so energy_distance(a, b) runs the exact same summation as
// energy_distance(b, a).
bool set_precedes(std::span<const LatentTensor> a,
                  std::span<const LatentTensor> b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto da = a[i].data();
    const auto db = b[i].data();
    for (std::size_t j = 0; j < da.size(); ++j) {
      if (da[j] < db[j]) return true;
      if (da[j] > db[j]) return false;
    }
  }
  return true;  // equal sets: either order yields identical sums
}

}  // namespace

TraceSummary trace_summary(std::span<const TrajectoryLog> logs) {
  if (logs.empty()) throw EmptyBatch("trace_summary of an empty batch");
  const std::size_t length = logs[0].size();
  if (length == 0) throw EmptyBatch("trace_summary of empty logs");
  for (std::size_t i = 1; i < logs.size(); ++i) {
    if (logs[i].size() != length)
      throw RaggedLogs("log " + std::to_string(i) + " has " +
                       std::to_string(logs[i].size()) + " records, expected " +
                       std::to_string(length));
    for (std::size_t s = 0; s < length; ++s)
      if (logs[i][s].step != logs[0][s].step)
        throw RaggedLogs("log " + std::to_string(i) +
                         " disagrees on step order");
  }

  TraceSummary out;
  out.step.resize(length);
  out.mean_ratio.resize(length);
  out.max_ratio.resize(length);
  out.fallback_fraction.resize(length);
  out.mean_moment.resize(length);

  const double batch = static_cast<double>(logs.size());
  for (std::size_t s = 0; s < length; ++s) {
    out.step[s] = logs[0][s].step;
    double ratio_sum = 0.0;
    double ratio_max = logs[0][s].e_cfg / logs[0][s].e_c;
    double moment_sum = 0.0;
    double fallback_count = 0.0;
    for (const auto& log : logs) {
      const double ratio = log[s].e_cfg / log[s].e_c;
      ratio_sum += ratio;
      ratio_max = std::max(ratio_max, ratio);
      moment_sum += log[s].state_moment;
      if (log[s].fallback_used) fallback_count += 1.0;
    }
    out.mean_ratio[s] = ratio_sum / batch;
    out.max_ratio[s] = ratio_max;
    out.fallback_fraction[s] = fallback_count / batch;
    out.mean_moment[s] = moment_sum / batch;
  }
  return out;
}

MomentStats moment_stats(std::span<const LatentTensor> samples) {
  if (samples.empty()) throw EmptyBatch("moment_stats of an empty batch");
  check_uniform_shape(samples, "moment_stats");

  const std::size_t d = samples[0].size();
  MomentStats out;
  out.mean.assign(d, 0.0);
  double moment = 0.0;
  for (const auto& x : samples) {
    for (std::size_t i = 0; i < d; ++i) out.mean[i] += x[i];
    moment += energy(x) / static_cast<double>(d);
  }
  const double n = static_cast<double>(samples.size());
  for (double& v : out.mean) v /= n;
  out.second_moment = moment / n;
  return out;
}

double energy_distance(std::span<const LatentTensor> a,
                       std::span<const LatentTensor> b) {
  if (a.empty() || b.empty())
    throw EmptyBatch("energy_distance of an empty sample set");
  check_uniform_shape(a, "energy_distance");
  check_uniform_shape(b, "energy_distance");
  if (!a[0].same_shape(b[0]))
    throw ShapeMismatch("energy_distance: sample sets disagree on shape");

  if (!set_precedes(a, b)) std::swap(a, b);
  const double cross = mean_pairwise(a, b);
  const double within_a = mean_pairwise(a, a);
  const double within_b = mean_pairwise(b, b);
  return std::max(0.0, 2.0 * cross - within_a - within_b);
}

}  // namespace epcfg
