#include "epcfg/latent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace epcfg {

namespace {

constexpr std::int64_t kMaxElements = std::int64_t(1) << 40;

std::vector<double> squared_values(const LatentTensor& x) {
  std::vector<double> q;
  q.reserve(x.size());
  for (double v : x.data()) q.push_back(v * v);
  return q;
}

// Shared interpolation so robust_energy's window bounds are bitwise equal
// to what percentile() returns for the same inputs.
double interpolate_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double rank = (p / 100.0) * static_cast<double>(n - 1);
  const auto j = static_cast<std::size_t>(rank);
  const double frac = rank - static_cast<double>(j);
  if (j >= n - 1 || frac == 0.0) return sorted[j];
  return sorted[j] + frac * (sorted[j + 1] - sorted[j]);
}

}  // namespace

LatentTensor LatentTensor::create(std::vector<std::int64_t> shape,
                                  std::vector<double> data) {
  if (shape.empty()) throw ShapeMismatch("latent shape must be non-empty");
  std::int64_t count = 1;
  for (std::int64_t d : shape) {
    if (d <= 0)
      throw ShapeMismatch("latent dimensions must be positive, got " +
                          std::to_string(d));
    if (count > kMaxElements / d)
      throw ShapeMismatch("latent shape product overflows");
    count *= d;
  }
  if (static_cast<std::size_t>(count) != data.size())
    throw ShapeMismatch("shape product " + std::to_string(count) +
                        " does not match data length " +
                        std::to_string(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i]))
      throw NonFiniteValue("latent element " + std::to_string(i) +
                           " is not finite");
  }
  return LatentTensor(std::move(shape), std::move(data));
}

void RobustWindow::validate() const {
  if (!(low >= 0.0 && low < high && high <= 100.0))
    throw InvalidWindow("robust window requires 0 <= low < high <= 100, got (" +
                        std::to_string(low) + ", " + std::to_string(high) +
                        ")");
}

double energy(const LatentTensor& x) {
  std::vector<double> q = squared_values(x);
  std::sort(q.begin(), q.end());
  double sum = 0.0;
  for (double v : q) sum += v;
  return sum;
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw EmptyInput("percentile of an empty sequence");
  if (!(p >= 0.0 && p <= 100.0))
    throw InvalidWindow("percentile must lie in [0,100], got " +
                        std::to_string(p));
  for (double v : values) {
    if (!std::isfinite(v))
      throw NonFiniteValue("percentile input contains a non-finite value");
  }
  std::vector<double> buf(values.begin(), values.end());
  const std::size_t n = buf.size();
  const double rank = (p / 100.0) * static_cast<double>(n - 1);
  const auto j = static_cast<std::size_t>(rank);
  const double frac = rank - static_cast<double>(j);
  std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(j),
                   buf.end());
  const double vj = buf[j];
  if (j >= n - 1 || frac == 0.0) return vj;
  const double vj1 =
      *std::min_element(buf.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                        buf.end());
  return vj + frac * (vj1 - vj);
}

RobustEnergyResult robust_energy(const LatentTensor& x,
                                 const RobustWindow& w) {
  w.validate();
  std::vector<double> q = squared_values(x);
  std::sort(q.begin(), q.end());

  RobustEnergyResult result;
  result.p_low = interpolate_sorted(q, w.low);
  result.p_high = interpolate_sorted(q, w.high);

  // q is ascending, so the in-window elements form one contiguous run and
  // the sum is accumulated smallest-first.
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : q) {
    if (v < result.p_low) continue;
    if (v > result.p_high) break;
    sum += v;
    ++count;
  }
  if (count == 0) {
    sum = 0.0;
    for (double v : q) sum += v;
    count = q.size();
  }
  result.energy = sum;
  result.count = count;
  return result;
}

}  // namespace epcfg
