#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "tarifflab/cluster.hpp"
#include "tarifflab/core_model.hpp"
#include "tarifflab/rng.hpp"

using namespace tarifflab;
using cluster::FeaturePoint;
using cluster::Point2;

namespace {

core::Dataset dataset_from(const std::vector<std::array<double, 2>>& tariff_eci) {
  core::Dataset d;
  for (std::size_t i = 0; i < tariff_eci.size(); ++i) {
    core::CountryRecord rec;
    rec.name = "C" + std::to_string(i);
    rec.tariff_charged_to_usa = 2.0 * tariff_eci[i][0];
    rec.usa_reciprocal_tariff = tariff_eci[i][0];
    rec.eci = tariff_eci[i][1];
    d.records.push_back(std::move(rec));
  }
  return d;
}

std::vector<FeaturePoint> random_points(SplitMix64& rng, std::size_t n) {
  std::vector<FeaturePoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    FeaturePoint p;
    p.country = "P" + std::to_string(i);
    p.x = rng.uniform(-2.0, 2.0);
    p.y = rng.uniform(-2.0, 2.0);
    p.raw_x = p.x;
    p.raw_y = p.y;
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<std::vector<double>> coords_of(const std::vector<FeaturePoint>& pts) {
  std::vector<std::vector<double>> coords;
  for (const auto& p : pts) coords.push_back({p.x, p.y});
  return coords;
}

}  // namespace

TEST_CASE("standardize produces population z-scores") {
  const auto dataset = dataset_from({{10, 1.0}, {20, 2.0}, {30, 3.0}});
  const auto space = cluster::standardize(dataset);
  REQUIRE(space.points.size() == 3);
  CHECK(space.points[0].x == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(space.points[1].x == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(space.points[2].x == doctest::Approx(1.2247).epsilon(1e-4));
  CHECK(space.points[0].raw_x == 10.0);
  CHECK(space.warnings.empty());
}

TEST_CASE("constant axis standardizes to zero with a warning") {
  const auto dataset = dataset_from({{5, 1.0}, {5, 2.0}, {5, 3.0}});
  const auto space = cluster::standardize(dataset);
  for (const auto& p : space.points) CHECK(p.x == 0.0);
  REQUIRE(space.warnings.size() == 1);
  CHECK(space.warnings[0] == doctest::Contains("constant"));
}

TEST_CASE("two records standardize to plus and minus one") {
  const auto dataset = dataset_from({{10, -1.0}, {30, 1.0}});
  const auto space = cluster::standardize(dataset);
  CHECK(space.points[0].x == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(space.points[1].x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(space.points[0].y == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(space.points[1].y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("records without an ECI are excluded and reported") {
  auto dataset = dataset_from({{10, 1.0}, {20, 2.0}});
  core::CountryRecord no_eci;
  no_eci.name = "NoEci";
  no_eci.tariff_charged_to_usa = 10;
  no_eci.usa_reciprocal_tariff = 10;
  dataset.records.push_back(no_eci);

  const auto space = cluster::standardize(dataset);
  CHECK(space.points.size() == 2);
  REQUIRE(space.excluded.size() == 1);
  CHECK(space.excluded[0] == "NoEci");

  core::Dataset all_missing;
  all_missing.records = {no_eci};
  CHECK_THROWS_AS(cluster::standardize(all_missing), core::InsufficientData);
}

TEST_CASE("standardized axes have mean zero and unit variance") {
  SplitMix64 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::array<double, 2>> rows;
    const std::size_t n = 2 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({rng.uniform(0.0, 90.0), rng.uniform(-2.5, 2.5)});
    }
    const auto space = cluster::standardize(dataset_from(rows));
    double mx = 0.0, my = 0.0;
    for (const auto& p : space.points) {
      mx += p.x;
      my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double vx = 0.0, vy = 0.0;
    for (const auto& p : space.points) {
      vx += (p.x - mx) * (p.x - mx);
      vy += (p.y - my) * (p.y - my);
    }
    vx /= static_cast<double>(n);
    vy /= static_cast<double>(n);
    CHECK(std::abs(mx) <= 1e-9);
    CHECK(std::abs(my) <= 1e-9);
    CHECK(std::sqrt(vx) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::sqrt(vy) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("three-feature variant standardizes the charged tariff too") {
  const auto dataset = dataset_from({{10, 1.0}, {20, 2.0}, {30, 3.0}});
  const auto space = cluster::standardize(dataset, cluster::FeatureSet::both_tariffs_eci);
  for (const auto& p : space.points) {
    REQUIRE(p.z.has_value());
    REQUIRE(p.raw_z.has_value());
  }
  CHECK(*space.points[0].z == doctest::Approx(-1.2247).epsilon(1e-4));
}

TEST_CASE("k=1 yields the coordinate-wise mean") {
  SplitMix64 rng(7);
  const auto pts = random_points(rng, 9);
  const auto model = cluster::kmeans(pts, 1, 1);
  REQUIRE(model.k == 1);

  double mx = 0.0, my = 0.0, inertia = 0.0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= 9.0;
  my /= 9.0;
  for (const auto& p : pts) {
    inertia += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
  }
  CHECK(model.centroids[0][0] == doctest::Approx(mx).epsilon(1e-12));
  CHECK(model.centroids[0][1] == doctest::Approx(my).epsilon(1e-12));
  CHECK(model.inertia == doctest::Approx(inertia).epsilon(1e-12));
}

TEST_CASE("well-separated pairs group by sign for any seed") {
  std::vector<FeaturePoint> pts;
  const std::vector<std::array<double, 2>> raw = {
      {-5.0, -5.0}, {-5.1, -5.0}, {5.0, 5.0}, {5.1, 5.0}};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    FeaturePoint p;
    p.country = "P" + std::to_string(i);
    p.x = raw[i][0];
    p.y = raw[i][1];
    p.raw_x = p.x;
    p.raw_y = p.y;
    pts.push_back(std::move(p));
  }
  for (std::uint64_t seed : {0ULL, 1ULL, 17ULL, 123456789ULL}) {
    const auto model = cluster::kmeans(pts, 2, seed, 1);
    CHECK(model.assignments.at("P0") == model.assignments.at("P1"));
    CHECK(model.assignments.at("P2") == model.assignments.at("P3"));
    CHECK(model.assignments.at("P0") != model.assignments.at("P2"));
  }
}

TEST_CASE("restarted k-means reaches the exhaustive optimum") {
  SplitMix64 rng(555);
  const auto pts = random_points(rng, 8);
  const auto model = cluster::kmeans(pts, 2, 99, 20);
  const double best = oracles::kmeans_exhaustive_best_inertia(coords_of(pts), 2);
  CHECK(model.inertia == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("k-means is deterministic and permutation invariant") {
  SplitMix64 rng(31337);
  auto pts = random_points(rng, 14);
  const auto a = cluster::kmeans(pts, 3, 42, 5);
  const auto b = cluster::kmeans(pts, 3, 42, 5);
  CHECK(a.assignments == b.assignments);
  CHECK(a.centroids == b.centroids);
  CHECK(a.inertia == b.inertia);

  // Deterministic permutation of the input order.
  std::vector<FeaturePoint> shuffled = pts;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  }
  const auto c = cluster::kmeans(shuffled, 3, 42, 5);
  CHECK(c.assignments == a.assignments);
  CHECK(c.centroids == a.centroids);
  CHECK(c.inertia == a.inertia);
}

TEST_CASE("per-iteration inertia never increases") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = random_points(rng, 6 + rng.below(20));
    const auto run = cluster::detail::lloyd_run(coords_of(pts), 3, rng.next());
    for (std::size_t i = 1; i < run.inertia_history.size(); ++i) {
      CHECK(run.inertia_history[i] <= run.inertia_history[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("assignments satisfy the nearest-centroid rule with low-index ties") {
  SplitMix64 rng(808);
  const auto pts = random_points(rng, 20);
  const auto model = cluster::kmeans(pts, 4, 5, 10);
  for (const auto& p : pts) {
    // Recompute the winner with strict improvement only, so exact ties keep
    // the lowest index. The fit must agree exactly.
    int expect = 0;
    double best_d = 1e300;
    for (int c = 0; c < model.k; ++c) {
      const auto& centroid = model.centroids[static_cast<std::size_t>(c)];
      const double dx = p.x - centroid[0];
      const double dy = p.y - centroid[1];
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        expect = c;
      }
    }
    CHECK(model.assignments.at(p.country) == expect);
  }
}

TEST_CASE("infeasible k is rejected") {
  SplitMix64 rng(3);
  const auto pts = random_points(rng, 4);
  CHECK_THROWS_AS(cluster::kmeans(pts, 5, 1), cluster::InfeasibleK);

  // Duplicate positions count once.
  auto dup = pts;
  for (std::size_t i = 0; i < dup.size(); ++i) {
    dup[i].x = 1.0;
    dup[i].y = 2.0;
  }
  CHECK_THROWS_AS(cluster::kmeans(dup, 2, 1), cluster::InfeasibleK);
}

TEST_CASE("convex hull basics") {
  SUBCASE("triangle is its own hull") {
    const std::vector<Point2> tri = {{0, 0}, {4, 0}, {0, 3}};
    const auto hull = cluster::convex_hull(tri);
    REQUIRE(hull.size() == 3);
    CHECK(oracles::hull_contains_all(hull, tri, 1e-9));
  }
  SUBCASE("interior point is excluded") {
    const std::vector<Point2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    const auto hull = cluster::convex_hull(pts);
    CHECK(hull.size() == 4);
    CHECK(oracles::hull_contains_all(hull, pts, 1e-9));
  }
  SUBCASE("collinear boundary points are excluded") {
    const std::vector<Point2> pts = {{0, 0}, {1, 0}, {2, 0}, {2, 2}, {1, 1}};
    const auto hull = cluster::convex_hull(pts);
    CHECK(hull.size() == 3);  // (1,0) sits on an edge, (1,1) on the diagonal
  }
  SUBCASE("one and two points pass through") {
    const std::vector<Point2> one = {{3, 4}};
    CHECK(cluster::convex_hull(one) == one);
    const std::vector<Point2> two = {{5, 1}, {2, 2}};
    const auto hull = cluster::convex_hull(two);
    REQUIRE(hull.size() == 2);
    CHECK(hull[0] == Point2{2, 2});  // sorted lexicographically
  }
  SUBCASE("fully collinear input keeps only the endpoints") {
    const std::vector<Point2> pts = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const auto hull = cluster::convex_hull(pts);
    REQUIRE(hull.size() == 2);
    CHECK(hull[0] == Point2{0, 0});
    CHECK(hull[1] == Point2{3, 3});
  }
}

TEST_CASE("hull is counterclockwise, containing and idempotent on random sets") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point2> pts;
    const std::size_t n = 1 + rng.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)});
    }
    const auto hull = cluster::convex_hull(pts);
    CHECK(oracles::hull_contains_all(hull, pts, 1e-9));
    CHECK(cluster::convex_hull(hull) == hull);

    if (hull.size() >= 3) {
      double area2 = 0.0;
      for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        area2 += a.x * b.y - b.x * a.y;
      }
      CHECK(area2 > 0.0);  // counterclockwise orientation
    }
  }
}

TEST_CASE("quadrant labels use the median split with a >= tie rule") {
  SUBCASE("four separated blobs get all four labels") {
    std::vector<std::array<double, 2>> rows;
    // (tariff, eci) blobs: low/low, low/high, high/low, high/high
    const std::vector<std::array<double, 2>> centers = {
        {10, -1.5}, {10, 1.5}, {60, -1.5}, {60, 1.5}};
    for (const auto& c : centers) {
      rows.push_back({c[0] - 2, c[1] - 0.1});
      rows.push_back({c[0] + 2, c[1] + 0.1});
      rows.push_back({c[0], c[1]});
    }
    const auto space = cluster::standardize(dataset_from(rows));
    const auto model = cluster::kmeans(space.points, 4, 11, 10);
    std::vector<std::string> labels = model.labels;
    std::sort(labels.begin(), labels.end());
    const std::vector<std::string> expected = {
        cluster::kLabelHighEciHighTariff, cluster::kLabelHighEciLowTariff,
        cluster::kLabelLowEciHighTariff, cluster::kLabelLowEciLowTariff};
    auto sorted_expected = expected;
    std::sort(sorted_expected.begin(), sorted_expected.end());
    CHECK(labels == sorted_expected);
  }
  SUBCASE("a centroid exactly on both medians reads as high/high") {
    // Two points: medians are the midpoints, and the single cluster's mean
    // lands exactly on them.
    const auto space = cluster::standardize(dataset_from({{10, 1.0}, {30, 3.0}}));
    const auto model = cluster::kmeans(space.points, 1, 1, 1);
    CHECK(model.labels[0] == cluster::kLabelHighEciHighTariff);
  }
}

TEST_CASE("cluster JSON carries the documented structure") {
  SplitMix64 rng(64);
  const auto pts = random_points(rng, 10);
  const auto model = cluster::kmeans(pts, 2, 9, 5);
  const auto j = cluster::model_to_json(model);

  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"k", "inertia", "clusters"});
  REQUIRE(j["clusters"].size() == 2);
  std::size_t members = 0;
  for (const auto& entry : j["clusters"]) {
    CHECK(entry.contains("label"));
    CHECK(entry.contains("centroid_raw"));
    CHECK(entry.contains("members"));
    CHECK(entry.contains("hull"));
    members += entry["members"].size();
  }
  CHECK(members == 10);
}
