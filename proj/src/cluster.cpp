#include "tarifflab/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "tarifflab/rng.hpp"

namespace tarifflab::cluster {

namespace {

struct AxisStats {
  double mean = 0.0;
  double sd = 0.0;     // population standard deviation
  bool constant = false;
};

AxisStats axis_stats(const std::vector<double>& values) {
  AxisStats s;
  s.constant = std::all_of(values.begin(), values.end(),
                           [&](double v) { return v == values.front(); });
  if (s.constant) {
    s.mean = values.front();
    return s;
  }
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

double zscore(double v, const AxisStats& s) {
  return s.constant ? 0.0 : (v - s.mean) / s.sd;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool lex_less(const Point2& a, const Point2& b) {
  return a.x != b.x ? a.x < b.x : a.y < b.y;
}

constexpr int kMaxIterations = 300;

}  // namespace

FeatureSpace standardize(const core::Dataset& dataset, FeatureSet features) {
  FeatureSpace space;
  std::vector<const core::CountryRecord*> usable;
  for (const auto& rec : dataset.records) {
    if (rec.eci) {
      usable.push_back(&rec);
    } else {
      space.excluded.push_back(rec.name);
    }
  }
  if (usable.empty()) {
    throw core::InsufficientData("no record has both a reciprocal tariff and an ECI");
  }

  std::vector<double> xs, ys, zs;
  for (const auto* rec : usable) {
    xs.push_back(rec->usa_reciprocal_tariff);
    ys.push_back(*rec->eci);
    if (features == FeatureSet::both_tariffs_eci) zs.push_back(rec->tariff_charged_to_usa);
  }
  const AxisStats sx = axis_stats(xs);
  const AxisStats sy = axis_stats(ys);
  const AxisStats sz = zs.empty() ? AxisStats{} : axis_stats(zs);
  if (sx.constant) space.warnings.push_back("reciprocal tariff axis is constant; standardized to 0");
  if (sy.constant) space.warnings.push_back("ECI axis is constant; standardized to 0");
  if (!zs.empty() && sz.constant) {
    space.warnings.push_back("charged tariff axis is constant; standardized to 0");
  }

  for (std::size_t i = 0; i < usable.size(); ++i) {
    FeaturePoint p;
    p.country = usable[i]->name;
    p.raw_x = xs[i];
    p.raw_y = ys[i];
    p.x = zscore(xs[i], sx);
    p.y = zscore(ys[i], sy);
    if (!zs.empty()) {
      p.raw_z = zs[i];
      p.z = zscore(zs[i], sz);
    }
    space.points.push_back(std::move(p));
  }
  return space;
}

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  if (pts.size() <= 2) return pts;
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  // Build lower then upper chain; cross <= 0 pops clockwise turns and
  // collinear points, so only strict corners survive.
  std::vector<Point2> hull;
  hull.reserve(pts.size() * 2);
  for (const auto& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }
  const std::size_t lower = hull.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (hull.size() >= lower && cross(hull[hull.size() - 2], hull.back(), *it) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(*it);
  }
  hull.pop_back();  // last point repeats the first
  if (hull.size() < 3) {
    // Fully collinear input collapses to its two extreme points.
    return {pts.front(), pts.back()};
  }
  return hull;
}

namespace detail {

LloydRun lloyd_run(const std::vector<std::vector<double>>& coords, int k,
                   std::uint64_t seed) {
  const std::size_t n = coords.size();
  SplitMix64 rng(seed);

  // Candidate initial positions: first occurrence of each distinct
  // coordinate vector, in canonical order.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    bool duplicate = false;
    for (std::size_t j : candidates) duplicate = duplicate || coords[j] == coords[i];
    if (!duplicate) candidates.push_back(i);
  }

  LloydRun run;
  std::vector<std::size_t> pool = candidates;
  for (int c = 0; c < k; ++c) {
    const std::size_t pick = rng.below(pool.size());
    run.centroids.push_back(coords[pool[pick]]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }

  run.assignment.assign(n, -1);
  std::vector<int> prev;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // Assignment pass: nearest centroid, ties to the lowest index.
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist2(coords[i], run.centroids[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist2(coords[i], run.centroids[static_cast<std::size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      run.assignment[i] = best;
      inertia += best_d;
    }
    run.inertia = inertia;
    run.inertia_history.push_back(inertia);
    if (run.assignment == prev) break;
    prev = run.assignment;

    // Update pass: recenter on member means.
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                          std::vector<double>(coords[0].size(), 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& sum = sums[static_cast<std::size_t>(run.assignment[i])];
      for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += coords[i][d];
      ++counts[static_cast<std::size_t>(run.assignment[i])];
    }
    std::vector<bool> reseeded(n, false);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        auto& centroid = run.centroids[static_cast<std::size_t>(c)];
        for (std::size_t d = 0; d < centroid.size(); ++d) {
          centroid[d] = sums[static_cast<std::size_t>(c)][d] /
                        static_cast<double>(counts[static_cast<std::size_t>(c)]);
        }
      }
    }
    // Empty clusters restart at the point farthest from its own centroid.
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (reseeded[i]) continue;
        const double d =
            dist2(coords[i], run.centroids[static_cast<std::size_t>(run.assignment[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      run.centroids[static_cast<std::size_t>(c)] = coords[far];
      reseeded[far] = true;
    }
  }

  // The iteration cap can in principle cut the loop right after an
  // assignment pass that left a cluster empty. Repair so the contract of
  // exactly k non-empty clusters holds unconditionally.
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (int a : run.assignment) ++counts[static_cast<std::size_t>(a)];
  bool repaired = false;
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) continue;
    std::size_t far = n;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto owner = static_cast<std::size_t>(run.assignment[i]);
      if (counts[owner] <= 1) continue;
      const double d = dist2(coords[i], run.centroids[owner]);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    --counts[static_cast<std::size_t>(run.assignment[far])];
    run.assignment[far] = c;
    ++counts[static_cast<std::size_t>(c)];
    repaired = true;
  }
  if (repaired) {
    for (int c = 0; c < k; ++c) {
      auto& centroid = run.centroids[static_cast<std::size_t>(c)];
      std::fill(centroid.begin(), centroid.end(), 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto& centroid = run.centroids[static_cast<std::size_t>(run.assignment[i])];
      for (std::size_t d = 0; d < centroid.size(); ++d) centroid[d] += coords[i][d];
    }
    for (int c = 0; c < k; ++c) {
      auto& centroid = run.centroids[static_cast<std::size_t>(c)];
      for (double& v : centroid) v /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
    run.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      run.inertia += dist2(coords[i], run.centroids[static_cast<std::size_t>(run.assignment[i])]);
    }
    run.inertia_history.push_back(run.inertia);
  }
  return run;
}

}  // namespace detail

ClusterModel kmeans(std::span<const FeaturePoint> points, int k, std::uint64_t seed,
                    int restarts) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");

  // Canonical name-sorted order; sampling and accumulation both run over it,
  // which makes the model independent of the caller's point order.
  std::vector<FeaturePoint> canon(points.begin(), points.end());
  std::sort(canon.begin(), canon.end(),
            [](const FeaturePoint& a, const FeaturePoint& b) { return a.country < b.country; });
  for (std::size_t i = 1; i < canon.size(); ++i) {
    if (canon[i].country == canon[i - 1].country) {
      throw std::invalid_argument("duplicate country name '" + canon[i].country + "'");
    }
  }

  std::vector<std::vector<double>> coords;
  coords.reserve(canon.size());
  for (const auto& p : canon) {
    std::vector<double> c{p.x, p.y};
    if (p.z) c.push_back(*p.z);
    coords.push_back(std::move(c));
  }

  std::size_t distinct = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    bool dup = false;
    for (std::size_t j = 0; j < i && !dup; ++j) dup = coords[j] == coords[i];
    if (!dup) ++distinct;
  }
  if (static_cast<std::size_t>(k) > distinct) {
    throw InfeasibleK("k=" + std::to_string(k) + " exceeds the " +
                      std::to_string(distinct) + " distinct points");
  }

  detail::LloydRun best;
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    auto run = detail::lloyd_run(coords, k, seed + static_cast<std::uint64_t>(r));
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      have_best = true;
    }
  }

  ClusterModel model;
  model.k = k;
  model.centroids = best.centroids;
  model.inertia = best.inertia;
  model.inertia_history = best.inertia_history;
  for (std::size_t i = 0; i < canon.size(); ++i) {
    model.assignments[canon[i].country] = best.assignment[i];
  }

  model.centroid_raw.assign(static_cast<std::size_t>(k), {0.0, 0.0});
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  std::vector<std::vector<Point2>> member_raw(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < canon.size(); ++i) {
    const auto c = static_cast<std::size_t>(best.assignment[i]);
    model.centroid_raw[c][0] += canon[i].raw_x;
    model.centroid_raw[c][1] += canon[i].raw_y;
    ++counts[c];
    member_raw[c].push_back({canon[i].raw_x, canon[i].raw_y});
  }
  for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
    model.centroid_raw[c][0] /= static_cast<double>(counts[c]);
    model.centroid_raw[c][1] /= static_cast<double>(counts[c]);
    model.hulls.push_back(convex_hull(member_raw[c]));
  }

  return label_quadrants(std::move(model), points);
}

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ClusterModel label_quadrants(ClusterModel model, std::span<const FeaturePoint> points) {
  std::vector<double> tariffs, ecis;
  for (const auto& p : points) {
    tariffs.push_back(p.raw_x);
    ecis.push_back(p.raw_y);
  }
  const double tariff_median = median(std::move(tariffs));
  const double eci_median = median(std::move(ecis));

  // Recompute the raw means from the assignments so the labels only depend
  // on the fit, not on previously cached values.
  std::vector<std::array<double, 2>> mean(static_cast<std::size_t>(model.k), {0.0, 0.0});
  std::vector<std::size_t> counts(static_cast<std::size_t>(model.k), 0);
  for (const auto& p : points) {
    const auto it = model.assignments.find(p.country);
    if (it == model.assignments.end()) continue;
    const auto c = static_cast<std::size_t>(it->second);
    mean[c][0] += p.raw_x;
    mean[c][1] += p.raw_y;
    ++counts[c];
  }

  model.labels.assign(static_cast<std::size_t>(model.k), "");
  for (std::size_t c = 0; c < static_cast<std::size_t>(model.k); ++c) {
    if (counts[c] == 0) continue;
    const double tariff_mean = mean[c][0] / static_cast<double>(counts[c]);
    const double eci_mean = mean[c][1] / static_cast<double>(counts[c]);
    const bool high_tariff = tariff_mean >= tariff_median;
    const bool high_eci = eci_mean >= eci_median;
    model.labels[c] = high_eci ? (high_tariff ? kLabelHighEciHighTariff : kLabelHighEciLowTariff)
                               : (high_tariff ? kLabelLowEciHighTariff : kLabelLowEciLowTariff);
  }
  return model;
}

nlohmann::ordered_json model_to_json(const ClusterModel& model) {
  nlohmann::ordered_json j;
  j["k"] = model.k;
  j["inertia"] = model.inertia;
  auto clusters = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < static_cast<std::size_t>(model.k); ++c) {
    nlohmann::ordered_json entry;
    entry["label"] = model.labels[c];
    entry["centroid_raw"] = {model.centroid_raw[c][0], model.centroid_raw[c][1]};
    auto members = nlohmann::ordered_json::array();
    for (const auto& [name, idx] : model.assignments) {
      if (static_cast<std::size_t>(idx) == c) members.push_back(name);
    }
    entry["members"] = std::move(members);
    auto hull = nlohmann::ordered_json::array();
    for (const auto& v : model.hulls[c]) hull.push_back({v.x, v.y});
    entry["hull"] = std::move(hull);
    clusters.push_back(std::move(entry));
  }
  j["clusters"] = std::move(clusters);
  return j;
}

}  // namespace tarifflab::cluster
