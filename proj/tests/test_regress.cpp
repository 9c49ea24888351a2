#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "tarifflab/core_model.hpp"
#include "tarifflab/regress.hpp"
#include "tarifflab/rng.hpp"

using namespace tarifflab;
using regress::PointXY;

namespace {

std::vector<PointXY> random_points(SplitMix64& rng, std::size_t n) {
  std::vector<PointXY> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({rng.uniform(0.0, 100.0), rng.uniform(-20.0, 80.0)});
  }
  return pts;
}

}  // namespace

TEST_CASE("points on the half-slope line fit exactly") {
  const std::vector<PointXY> pts = {{0, 0}, {10, 5}, {20, 10}};
  const auto fit = regress::fit_ols(pts);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(fit.degenerate_fit);
}

TEST_CASE("constant y uses the zero total variance convention") {
  const std::vector<PointXY> pts = {{1, 7}, {2, 7}, {3, 7}};
  const auto fit = regress::fit_ols(pts);
  CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(fit.r_squared == 0.0);
  CHECK(fit.degenerate_fit);
}

TEST_CASE("fit matches the normal-equations oracle on seeded points") {
  SplitMix64 rng(8812);
  const auto pts = random_points(rng, 10);
  const auto fit = regress::fit_ols(pts);
  const auto line = oracles::ols_normal_equations(pts);
  CHECK(fit.slope == doctest::Approx(line.slope).epsilon(1e-9));
  CHECK(fit.intercept == doctest::Approx(line.intercept).epsilon(1e-9));
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(regress::fit_ols(std::vector<PointXY>{{1, 2}}), core::InsufficientData);
  CHECK_THROWS_AS(regress::fit_ols(std::vector<PointXY>{}), core::InsufficientData);
  CHECK_THROWS_AS(regress::fit_ols(std::vector<PointXY>{{3, 1}, {3, 2}, {3, 5}}),
                  regress::DegenerateDesign);
}

TEST_CASE("residuals sum to zero and r2 stays in range") {
  SplitMix64 rng(314159);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pts = random_points(rng, 2 + rng.below(30));
    regress::RegressionFit fit;
    try {
      fit = regress::fit_ols(pts);
    } catch (const regress::DegenerateDesign&) {
      continue;  // astronomically unlikely with random doubles
    }
    double sum = 0.0, mean_abs_y = 0.0;
    for (double r : fit.residuals) sum += r;
    for (const auto& p : pts) mean_abs_y += std::abs(p.y);
    mean_abs_y /= static_cast<double>(pts.size());
    CHECK(std::abs(sum) <= 1e-9 * std::max(1.0, mean_abs_y));
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);

    // Brute-force recomputation of r2 = 1 - SSR/SST.
    double y_mean = 0.0;
    for (const auto& p : pts) y_mean += p.y;
    y_mean /= static_cast<double>(pts.size());
    double ssr = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      ssr += fit.residuals[i] * fit.residuals[i];
      sst += (pts[i].y - y_mean) * (pts[i].y - y_mean);
    }
    if (sst > 0.0) {
      CHECK(fit.r_squared == doctest::Approx(1.0 - ssr / sst).epsilon(1e-9));
    }
  }
}

TEST_CASE("affine equivariance") {
  SplitMix64 rng(99);
  const auto pts = random_points(rng, 17);
  const auto base = regress::fit_ols(pts);

  const double c = 3.75;
  std::vector<PointXY> scaled = pts, shifted = pts;
  for (auto& p : scaled) p.y *= c;
  for (auto& p : shifted) p.x += c;

  const auto fit_scaled = regress::fit_ols(scaled);
  CHECK(fit_scaled.slope == doctest::Approx(base.slope * c).epsilon(1e-9));
  CHECK(fit_scaled.intercept == doctest::Approx(base.intercept * c).epsilon(1e-9));

  const auto fit_shifted = regress::fit_ols(shifted);
  CHECK(fit_shifted.slope == doctest::Approx(base.slope).epsilon(1e-9));
  CHECK(fit_shifted.intercept ==
        doctest::Approx(base.intercept - base.slope * c).epsilon(1e-9));
}

TEST_CASE("collinear inputs reproduce y exactly") {
  std::vector<PointXY> pts;
  for (int i = 0; i < 12; ++i) {
    pts.push_back({static_cast<double>(i), 3.0 - 0.25 * static_cast<double>(i)});
  }
  const auto fit = regress::fit_ols(pts);
  for (double r : fit.residuals) CHECK(std::abs(r) <= 1e-9);
}

TEST_CASE("reciprocity assessment") {
  auto with_slope = [](double slope) {
    regress::RegressionFit fit;
    fit.slope = slope;
    return fit;
  };
  SUBCASE("discounted") {
    const auto a = regress::assess_reciprocity(with_slope(0.5));
    CHECK(a.is_discounted);
    CHECK(a.discount_factor == doctest::Approx(0.5));
  }
  SUBCASE("equal tariffs boundary") {
    const auto a = regress::assess_reciprocity(with_slope(1.0));
    CHECK_FALSE(a.is_discounted);
    CHECK(a.discount_factor == 0.0);
  }
  SUBCASE("amplified") {
    const auto a = regress::assess_reciprocity(with_slope(1.3));
    CHECK_FALSE(a.is_discounted);
    CHECK(a.discount_factor == doctest::Approx(-0.3));
  }
}

TEST_CASE("fit JSON uses the exact documented keys") {
  const std::vector<PointXY> pts = {{0, 0}, {10, 5}, {20, 10}};
  const auto j = regress::fit_to_json(regress::fit_ols(pts));
  const std::vector<std::string> expected = {"slope",       "intercept",
                                             "r_squared",   "n",
                                             "is_discounted", "discount_factor"};
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == expected);
  CHECK(j["n"] == 3);
  CHECK(j["is_discounted"] == true);
}
