#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "epcfg/errors.hpp"

namespace epcfg {

// Dense latent sample: a flat array of finite doubles plus shape metadata.
// Instances are immutable after construction and safe to share across
// threads.
class LatentTensor {
 public:
  // Validates and constructs. Throws ShapeMismatch if the shape is empty,
  // has a non-positive dimension, or its product disagrees with the data
  // length; NonFiniteValue if any element is NaN or infinite.
  static LatentTensor create(std::vector<std::int64_t> shape,
                             std::vector<double> data);

  const std::vector<std::int64_t>& shape() const noexcept { return shape_; }
  std::span<const double> data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  bool same_shape(const LatentTensor& other) const noexcept {
    return shape_ == other.shape_;
  }

 private:
  LatentTensor(std::vector<std::int64_t> shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {}

  std::vector<std::int64_t> shape_;
  std::vector<double> data_;
};

inline LatentTensor make_latent(std::vector<std::int64_t> shape,
                                std::vector<double> data) {
  return LatentTensor::create(std::move(shape), std::move(data));
}

// Percentile window over squared element values. The default keeps the
// middle decile of the squared-value distribution.
struct RobustWindow {
  double low = 45.0;
  double high = 55.0;

  // Throws InvalidWindow unless 0 <= low < high <= 100.
  void validate() const;
};

struct RobustEnergyResult {
  double energy = 0.0;     // sum of squared values inside the window
  double p_low = 0.0;      // lower window bound (percentile of the squares)
  double p_high = 0.0;     // upper window bound
  std::size_t count = 0;   // number of elements inside the window
};

// Squared L2 norm. Squares are accumulated in ascending order, so the
// result is independent of element order and bitwise-identical to a full
// robust window sum.
double energy(const LatentTensor& x);

// Linear-interpolation percentile over order statistics:
//   r = (p/100)*(N-1),  result = v[floor(r)] + frac(r)*(v[floor(r)+1] - v[floor(r)])
// with v the ascending sorted values. Throws EmptyInput for an empty
// sequence, InvalidWindow for p outside [0,100], NonFiniteValue for
// non-finite entries.
double percentile(std::span<const double> values, double p);

// Energy restricted to squares q_i = x_i^2 lying inside the inclusive band
// [P_low, P_high], where the bounds are the window percentiles of the
// squares themselves. For small N the interpolated band can exclude every
// element; the sum then falls back to the full energy with count == size().
RobustEnergyResult robust_energy(const LatentTensor& x,
                                 const RobustWindow& w = {});

}  // namespace epcfg
