#include <vector>

#include "doctest.h"
#include "epcfg/schedule.hpp"

using namespace epcfg;

TEST_SUITE("schedule") {

TEST_CASE("zero betas keep full signal") {
  const DiffusionSchedule s = vp_schedule(3, 0.0, 0.0);
  CHECK(s.steps() == 3);
  for (int t = 0; t <= 3; ++t) CHECK(s.alpha_bar(t) == 1.0);
}

TEST_CASE("single step uses beta_min") {
  const DiffusionSchedule s = vp_schedule(1, 0.5, 0.5);
  CHECK(s.levels() == std::vector<double>{1.0, 0.5});
}

TEST_CASE("default schedule decreases strictly and matches a product oracle") {
  const DiffusionSchedule s = vp_schedule();
  CHECK(s.steps() == 50);
  CHECK(s.alpha_bar(0) == 1.0);
  for (int t = 1; t <= 50; ++t) CHECK(s.alpha_bar(t) < s.alpha_bar(t - 1));
  CHECK(s.alpha_bar(50) > 0.0);
  CHECK(s.alpha_bar(50) < 1.0);

  double product = 1.0;
  for (int t = 1; t <= 50; ++t) {
    const double beta = 1e-4 + (0.2 - 1e-4) * (double(t - 1) / 49.0);
    product *= 1.0 - beta;
    CHECK(s.alpha_bar(t) == product);
  }
}

TEST_CASE("vp_schedule rejects bad ranges") {
  CHECK_THROWS_AS(vp_schedule(0, 0.0, 0.1), InvalidRange);
  CHECK_THROWS_AS(vp_schedule(10, -0.1, 0.1), InvalidRange);
  CHECK_THROWS_AS(vp_schedule(10, 0.2, 0.1), InvalidRange);
  CHECK_THROWS_AS(vp_schedule(10, 0.1, 1.0), InvalidRange);
}

TEST_CASE("create validates levels") {
  CHECK_THROWS_AS(DiffusionSchedule::create({1.0}), InvalidRange);
  CHECK_THROWS_AS(DiffusionSchedule::create({0.9, 0.5}), InvalidRange);
  CHECK_THROWS_AS(DiffusionSchedule::create({1.0, 0.4, 0.6}), InvalidRange);
  CHECK_THROWS_AS(DiffusionSchedule::create({1.0, 0.0}), InvalidRange);
  CHECK_THROWS_AS(DiffusionSchedule::create({1.0, 1.1}), InvalidRange);
  // equal adjacent levels are allowed (a zero-beta step)
  CHECK_NOTHROW(DiffusionSchedule::create({1.0, 0.5, 0.5}));
}

TEST_CASE("step indexing is bounds checked") {
  const DiffusionSchedule s = vp_schedule(5);
  CHECK_THROWS_AS(s.alpha_bar(-1), IndexOutOfRange);
  CHECK_THROWS_AS(s.alpha_bar(6), IndexOutOfRange);
}

}  // TEST_SUITE
