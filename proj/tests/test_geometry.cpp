#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "obf/geometry.hpp"
#include "obf/rng.hpp"
#include "support/stats.hpp"

using Catch::Approx;

TEST_CASE("annulus area") {
  CHECK(obf::AnnulusRegion(0.0, 1.0).area() ==
        Approx(3.14159265358979324).epsilon(1e-12));
  const obf::AnnulusRegion ring(2.0, 10.0);
  CHECK(ring.area() == Approx(301.59289474462015).epsilon(1e-12));  // 96 pi
  CHECK(obf::annulus_area(ring) == ring.area());
}

TEST_CASE("degenerate regions rejected") {
  CHECK_THROWS_AS(obf::AnnulusRegion(2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(obf::AnnulusRegion(3.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(obf::AnnulusRegion(-1.0, 5.0), std::invalid_argument);
}

TEST_CASE("radial inverse-CDF map hits the boundaries") {
  const obf::AnnulusRegion region(2.0, 10.0);
  CHECK(region.radius_from_uniform(0.0) == Approx(2.0).epsilon(1e-14));
  CHECK(region.radius_from_uniform(1.0) == Approx(10.0).epsilon(1e-14));
  CHECK(region.radial_cdf(2.0) == Approx(0.0).margin(1e-15));
  CHECK(region.radial_cdf(10.0) == Approx(1.0).epsilon(1e-14));
  CHECK(region.radial_cdf(5.0) == Approx(21.0 / 96.0).epsilon(1e-14));
}

TEST_CASE("zero intensity yields empty fields") {
  const obf::AnnulusRegion region(2.0, 10.0);
  obf::RandomSource rng(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(obf::sample_ppp(region, 0.0, rng).count() == 0);
  }
  CHECK_THROWS_AS(obf::sample_ppp(region, -0.1, rng), std::invalid_argument);
}

TEST_CASE("field count is Poisson with the right mean and dispersion") {
  const obf::AnnulusRegion region(2.0, 10.0);
  const double target = 0.1 * region.area();  // 9.6 pi
  obf::RandomSource rng(2024);
  const int draws = 100000;
  std::vector<double> counts;
  counts.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    counts.push_back(static_cast<double>(obf::sample_ppp(region, 0.1, rng).count()));
  }
  const double m = testsupport::mean(counts);
  const double se = std::sqrt(target / draws);
  CHECK(std::abs(m - target) < 3.0 * se);
  const double v = testsupport::variance(counts);
  CHECK(std::abs(v / m - 1.0) < 0.05);
}

TEST_CASE("sampled distances follow the annulus radial law") {
  const obf::AnnulusRegion region(2.0, 10.0);
  obf::RandomSource rng(7);
  std::vector<double> distances;
  distances.reserve(1100000);
  while (distances.size() < 1000000) {
    const obf::TerminalField f = obf::sample_ppp(region, 0.1, rng);
    distances.insert(distances.end(), f.distances.begin(), f.distances.end());
  }
  distances.resize(1000000);
  for (double d : distances) {
    CHECK(d >= 2.0);
    CHECK(d <= 10.0);
  }
  const double ks = testsupport::ks_one_sample(
      distances, [](double r) { return (r * r - 4.0) / 96.0; });
  CHECK(ks < 0.002);
}

TEST_CASE("thinning with constant predicates") {
  const obf::AnnulusRegion region(2.0, 10.0);
  obf::RandomSource rng(5);
  const obf::TerminalField field = obf::sample_ppp(region, 0.1, rng);
  REQUIRE(field.count() > 0);

  auto [kept_all, dropped_none] =
      obf::thin(field, [](double, obf::RandomSource&) { return true; }, rng);
  CHECK(kept_all.count() == field.count());
  CHECK(dropped_none.count() == 0);
  CHECK(kept_all.distances == field.distances);

  auto [kept_none, dropped_all] =
      obf::thin(field, [](double, obf::RandomSource&) { return false; }, rng);
  CHECK(kept_none.count() == 0);
  CHECK(dropped_all.distances == field.distances);
}

TEST_CASE("thinning partitions the field") {
  const obf::AnnulusRegion region(2.0, 10.0);
  obf::RandomSource rng(11);
  const obf::TerminalField field = obf::sample_ppp(region, 0.2, rng);
  auto [kept, dropped] = obf::thin(
      field, [](double, obf::RandomSource& r) { return r.uniform01() < 0.3; }, rng);
  CHECK(kept.count() + dropped.count() == field.count());
  std::vector<double> merged = kept.distances;
  merged.insert(merged.end(), dropped.distances.begin(), dropped.distances.end());
  std::sort(merged.begin(), merged.end());
  std::vector<double> original = field.distances;
  std::sort(original.begin(), original.end());
  CHECK(merged == original);
}

TEST_CASE("independent coin thinning halves the intensity") {
  const obf::AnnulusRegion region(2.0, 10.0);
  const double target = 0.5 * 0.1 * region.area();
  obf::RandomSource rng(99);
  const int draws = 100000;
  std::vector<double> counts;
  counts.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    const obf::TerminalField field = obf::sample_ppp(region, 0.1, rng);
    auto [kept, dropped] = obf::thin(
        field, [](double, obf::RandomSource& r) { return r.uniform01() < 0.5; }, rng);
    counts.push_back(static_cast<double>(kept.count()));
  }
  const double m = testsupport::mean(counts);
  const double se = std::sqrt(target / draws);  // thinned counts stay Poisson
  CHECK(std::abs(m - target) < 3.0 * se);
}
