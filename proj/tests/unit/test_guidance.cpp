#include <cmath>
#include <vector>

#include "doctest.h"
#include "epcfg/guidance.hpp"
#include "epcfg/rng.hpp"
#include "test_util.hpp"

using namespace epcfg;
using epcfg_test::bitwise_equal;
using epcfg_test::random_latent;
using epcfg_test::rel_diff;

namespace {

double cosine(const LatentTensor& a, const LatentTensor& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

}  // namespace

TEST_SUITE("guidance") {

TEST_CASE("cfg_combine worked values") {
  const LatentTensor a = cfg_combine(make_latent({2}, {1.0, 0.0}),
                                     make_latent({2}, {0.0, 0.0}), 3.0);
  CHECK(a[0] == 3.0);
  CHECK(a[1] == 0.0);

  const LatentTensor b = cfg_combine(make_latent({2}, {2.0, 1.0}),
                                     make_latent({2}, {1.0, 1.0}), 7.5);
  CHECK(b[0] == doctest::Approx(8.5).epsilon(1e-15));
  CHECK(b[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cfg_combine strength one is a bitwise identity") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const LatentTensor x_c = random_latent(rng, 17);
    const LatentTensor x_u = random_latent(rng, 17);
    CHECK(bitwise_equal(cfg_combine(x_c, x_u, 1.0), x_c));
  }
  // negative zero survives too
  const LatentTensor z = make_latent({2}, {-0.0, 1.0});
  CHECK(bitwise_equal(cfg_combine(z, make_latent({2}, {5.0, 5.0}), 1.0), z));
}

TEST_CASE("cfg_combine error paths") {
  const LatentTensor a = make_latent({2}, {1.0, 2.0});
  const LatentTensor b = make_latent({3}, {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(cfg_combine(a, b, 2.0), ShapeMismatch);
  CHECK_THROWS_AS(cfg_combine(a, a, 0.5), InvalidStrength);
  CHECK_THROWS_AS(cfg_combine(a, a, std::nan("")), InvalidStrength);

  const LatentTensor huge = make_latent({1}, {1e308});
  const LatentTensor neg = make_latent({1}, {-1e308});
  CHECK_THROWS_AS(cfg_combine(huge, neg, 3.0), NonFiniteResult);
}

TEST_CASE("plain mode matches the common-form combination") {
  Rng rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 32);
    const LatentTensor x_c = random_latent(rng, n);
    const LatentTensor x_u = random_latent(rng, n);
    const double lambda = 1.0 + 14.0 * rng.uniform01();
    const LatentTensor combined = cfg_combine(x_c, x_u, lambda);
    for (std::size_t i = 0; i < n; ++i) {
      const double common = lambda * x_c[i] + (1.0 - lambda) * x_u[i];
      const double bound =
          1e-12 * (1.0 + lambda * (std::abs(x_c[i]) + std::abs(x_u[i])));
      CHECK(std::abs(combined[i] - common) <= bound);
    }
  }
}

TEST_CASE("ep_rescale worked example") {
  const auto [out, report] = ep_rescale(make_latent({2}, {6.0, 8.0}),
                                        make_latent({2}, {3.0, 4.0}),
                                        {0.0, 100.0});
  CHECK(report.e_c == 25.0);
  CHECK(report.e_cfg == 100.0);
  CHECK(report.scale == 0.5);
  CHECK(out[0] == 3.0);
  CHECK(out[1] == 4.0);
  CHECK_FALSE(report.fallback_used);
}

TEST_CASE("ep_rescale of identical inputs is exact") {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const LatentTensor x = random_latent(rng, 9);
    const auto [out, report] = ep_rescale(x, x, {45.0, 55.0});
    CHECK(report.scale == 1.0);
    CHECK(bitwise_equal(out, x));
  }
}

TEST_CASE("ep_rescale preserves robust energy") {
  Rng rng(44);
  const RobustWindow w{45.0, 55.0};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 64);
    const LatentTensor x_cfg = random_latent(rng, n);
    const LatentTensor x_c = random_latent(rng, n);
    const auto [out, report] = ep_rescale(x_cfg, x_c, w);
    if (report.fallback_used) continue;
    CHECK(rel_diff(robust_energy(out, w).energy, robust_energy(x_c, w).energy) <
          1e-6);
    CHECK(rel_diff(report.scale * report.scale * report.e_cfg, report.e_c) <
          1e-9);
    CHECK(report.scale > 0.0);
  }
}

TEST_CASE("ep_rescale degenerate energies pass through") {
  const LatentTensor zero = make_latent({3}, {0.0, 0.0, 0.0});
  const LatentTensor live = make_latent({3}, {1.0, 2.0, 3.0});

  const auto [out1, rep1] = ep_rescale(zero, live, {0.0, 100.0});
  CHECK(rep1.fallback_used);
  CHECK(rep1.scale == 1.0);
  CHECK(bitwise_equal(out1, zero));

  const auto [out2, rep2] = ep_rescale(live, zero, {0.0, 100.0});
  CHECK(rep2.fallback_used);
  CHECK(rep2.scale == 1.0);
  CHECK(bitwise_equal(out2, live));
}

TEST_CASE("ep_cfg strength one returns the conditional bitwise") {
  Rng rng(55);
  GuidanceParams params;
  params.strength = 1.0;
  params.mode = GuidanceMode::EnergyPreserving;
  for (int trial = 0; trial < 100; ++trial) {
    const LatentTensor x_c = random_latent(rng, 13);
    const LatentTensor x_u = random_latent(rng, 13);
    const auto [out, report] = ep_cfg(x_c, x_u, params);
    CHECK(bitwise_equal(out, x_c));
    CHECK(report.scale == 1.0);
  }
}

TEST_CASE("ep_cfg chained worked example") {
  GuidanceParams params;
  params.strength = 2.0;
  params.mode = GuidanceMode::EnergyPreserving;
  params.window = {0.0, 100.0};
  const auto [out, report] = ep_cfg(make_latent({2}, {3.0, 4.0}),
                                    make_latent({2}, {0.0, 0.0}), params);
  CHECK(report.scale == 0.5);
  CHECK(out[0] == 3.0);
  CHECK(out[1] == 4.0);
}

TEST_CASE("ep_cfg is positively homogeneous") {
  Rng rng(66);
  GuidanceParams params;
  params.strength = 7.0;
  params.mode = GuidanceMode::EnergyPreserving;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 24);
    const LatentTensor x_c = random_latent(rng, n);
    const LatentTensor x_u = random_latent(rng, n);
    const double a = std::exp(std::log(0.01) +
                              rng.uniform01() * (std::log(100.0) - std::log(0.01)));

    std::vector<double> sc(n), su(n);
    for (std::size_t i = 0; i < n; ++i) {
      sc[i] = a * x_c[i];
      su[i] = a * x_u[i];
    }
    const auto scaled =
        ep_cfg(make_latent(x_c.shape(), std::move(sc)),
               make_latent(x_u.shape(), std::move(su)), params);
    const auto base = ep_cfg(x_c, x_u, params);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(rel_diff(scaled.output[i], a * base.output[i]) < 1e-9);
  }
}

TEST_CASE("ep_cfg preserves direction and signs") {
  Rng rng(77);
  GuidanceParams params;
  params.strength = 9.0;
  params.mode = GuidanceMode::EnergyPreserving;
  GuidanceParams plain = params;
  plain.mode = GuidanceMode::Plain;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 24);
    const LatentTensor x_c = random_latent(rng, n);
    const LatentTensor x_u = random_latent(rng, n);
    const auto ep = ep_cfg(x_c, x_u, params);
    const auto combined = ep_cfg(x_c, x_u, plain);
    if (ep.report.fallback_used) continue;
    CHECK(cosine(ep.output, combined.output) >= 1.0 - 1e-9);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::signbit(ep.output[i]) == std::signbit(combined.output[i]));
  }
}

TEST_CASE("ep_cfg plain mode reports both energies with scale one") {
  Rng rng(88);
  GuidanceParams params;
  params.strength = 5.0;
  params.mode = GuidanceMode::Plain;
  const LatentTensor x_c = random_latent(rng, 16);
  const LatentTensor x_u = random_latent(rng, 16);
  const auto [out, report] = ep_cfg(x_c, x_u, params);
  CHECK(report.scale == 1.0);
  CHECK_FALSE(report.fallback_used);
  CHECK(report.e_c == robust_energy(x_c, params.window).energy);
  CHECK(report.e_cfg == robust_energy(out, params.window).energy);
  CHECK(report.window_c.first <= report.window_c.second);
}

TEST_CASE("ep_cfg std mode matches the baseline and reports its factor") {
  Rng rng(99);
  GuidanceParams params;
  params.strength = 4.0;
  params.mode = GuidanceMode::StdRescale;
  params.phi = 0.7;
  for (int trial = 0; trial < 50; ++trial) {
    const LatentTensor x_c = random_latent(rng, 21);
    const LatentTensor x_u = random_latent(rng, 21);
    const LatentTensor combined = cfg_combine(x_c, x_u, params.strength);
    const LatentTensor expected = std_rescale_baseline(combined, x_c, params.phi);
    const auto [out, report] = ep_cfg(x_c, x_u, params);
    CHECK(bitwise_equal(out, expected));
    for (std::size_t i = 0; i < out.size(); ++i)
      CHECK(rel_diff(out[i], report.scale * combined[i]) < 1e-12);
  }
}

TEST_CASE("std_rescale_baseline worked values") {
  const LatentTensor x_cfg = make_latent({2}, {2.0, -2.0});
  const LatentTensor x_c = make_latent({2}, {1.0, -1.0});

  const LatentTensor full = std_rescale_baseline(x_cfg, x_c, 1.0);
  CHECK(full[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(full[1] == doctest::Approx(-1.0).epsilon(1e-15));

  const LatentTensor mixed = std_rescale_baseline(x_cfg, x_c, 0.7);
  CHECK(mixed[0] == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(mixed[1] == doctest::Approx(-1.3).epsilon(1e-12));

  CHECK(bitwise_equal(std_rescale_baseline(x_cfg, x_c, 0.0), x_cfg));
}

TEST_CASE("std_rescale_baseline degenerate and error paths") {
  const LatentTensor flat = make_latent({3}, {2.0, 2.0, 2.0});
  const LatentTensor live = make_latent({3}, {1.0, -1.0, 0.0});
  CHECK(bitwise_equal(std_rescale_baseline(flat, live, 0.9), flat));

  CHECK_THROWS_AS(std_rescale_baseline(live, live, -0.1), InvalidPhi);
  CHECK_THROWS_AS(std_rescale_baseline(live, live, 1.5), InvalidPhi);
  CHECK_THROWS_AS(
      std_rescale_baseline(live, make_latent({2}, {1.0, 2.0}), 0.5),
      ShapeMismatch);
}

TEST_CASE("guidance params validation") {
  GuidanceParams params;
  params.strength = 0.9;
  CHECK_THROWS_AS(params.validate(), InvalidStrength);
  params.strength = 2.0;
  params.phi = 1.5;
  CHECK_THROWS_AS(params.validate(), InvalidPhi);
  params.phi = 0.5;
  params.window = {70.0, 30.0};
  CHECK_THROWS_AS(params.validate(), InvalidWindow);
  params.window = {45.0, 55.0};
  CHECK_NOTHROW(params.validate());

  CHECK(guidance_mode_from_string("plain") == GuidanceMode::Plain);
  CHECK(guidance_mode_from_string("ep") == GuidanceMode::EnergyPreserving);
  CHECK(guidance_mode_from_string("std") == GuidanceMode::StdRescale);
  CHECK_THROWS_AS(guidance_mode_from_string("energy"), Error);
}

}  // TEST_SUITE
