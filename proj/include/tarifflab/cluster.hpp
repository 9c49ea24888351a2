#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tarifflab/core_model.hpp"

namespace tarifflab::cluster {

// A country in clustering feature space. x/y are population z-scores of the
// US reciprocal tariff and the ECI; raw_x/raw_y keep the original units for
// hulls, labels and plotting. z is only set for the three-feature variant
// (partner tariff charged to the USA as an extra axis).
struct FeaturePoint {
  std::string country;
  double x = 0.0;
  double y = 0.0;
  double raw_x = 0.0;  // reciprocal tariff, percent
  double raw_y = 0.0;  // ECI
  std::optional<double> z;
  std::optional<double> raw_z;  // tariff charged to the USA, percent
};

enum class FeatureSet {
  tariff_eci,        // reciprocal tariff + ECI (the 2-D default)
  both_tariffs_eci,  // adds the tariff charged to the USA as a third axis
};

struct FeatureSpace {
  std::vector<FeaturePoint> points;    // dataset order, usable records only
  std::vector<std::string> excluded;   // country names dropped for missing ECI
  std::vector<std::string> warnings;   // constant-axis notes
};

// Z-scores each axis over the usable records (population standard
// deviation). A constant axis standardizes to all zeros with a warning.
// Throws core::InsufficientData when no record has an ECI.
FeatureSpace standardize(const core::Dataset& dataset,
                         FeatureSet features = FeatureSet::tariff_eci);

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

// Counterclockwise convex hull via the monotone chain construction.
// Collinear boundary points are excluded; inputs of size <= 2 are returned
// as-is (sorted lexicographically).
std::vector<Point2> convex_hull(std::span<const Point2> points);

inline constexpr const char* kLabelHighEciLowTariff = "High ECI / Low Tariff";
inline constexpr const char* kLabelHighEciHighTariff = "High ECI / High Tariff";
inline constexpr const char* kLabelLowEciHighTariff = "Low ECI / High Tariff";
inline constexpr const char* kLabelLowEciLowTariff = "Low ECI / Low Tariff";

struct ClusterModel {
  int k = 0;
  // Centroids in standardized space, 2 or 3 coordinates per cluster.
  std::vector<std::vector<double>> centroids;
  std::map<std::string, int> assignments;  // country -> cluster index
  double inertia = 0.0;
  // Mean raw coordinates (tariff, ECI) of each cluster's members.
  std::vector<std::array<double, 2>> centroid_raw;
  // Convex hull of each cluster's members in raw coordinates.
  std::vector<std::vector<Point2>> hulls;
  std::vector<std::string> labels;
  // Inertia after each assignment pass of the winning restart; never
  // increases from one entry to the next.
  std::vector<double> inertia_history;
};

class InfeasibleK : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lloyd's algorithm. Initial centroids are sampled without replacement from
// the distinct point positions; iteration stops when assignments are stable
// or after 300 passes; the best inertia over `restarts` runs wins (restart r
// uses sub-seed seed + r, ties keep the lowest restart index). Sampling and
// iteration order follow a canonical name-sorted ordering of the points, so
// the result is independent of input permutation. Throws InfeasibleK when k
// exceeds the number of distinct positions.
ClusterModel kmeans(std::span<const FeaturePoint> points, int k, std::uint64_t seed,
                    int restarts = 10);

// Labels every cluster by comparing its mean raw coordinates against the
// dataset-wide medians (>= median reads as High). Labels may repeat.
ClusterModel label_quadrants(ClusterModel model, std::span<const FeaturePoint> points);

// {"k", "inertia", "clusters": [{"label", "centroid_raw", "members", "hull"}]}
nlohmann::ordered_json model_to_json(const ClusterModel& model);

namespace detail {

struct LloydRun {
  std::vector<std::vector<double>> centroids;
  std::vector<int> assignment;  // parallel to the canonical point order
  double inertia = 0.0;
  std::vector<double> inertia_history;
};

// One seeded Lloyd run over points already in canonical order. Exposed so
// tests can assert monotone descent per iteration.
LloydRun lloyd_run(const std::vector<std::vector<double>>& coords, int k,
                   std::uint64_t seed);

}  // namespace detail

}  // namespace tarifflab::cluster
