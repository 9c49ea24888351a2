#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tarifflab::report {

struct Artifact {
  std::string path;  // relative to the run's output directory
  std::string kind;  // "json", "csv" or "svg"
};

struct InputDigest {
  std::string name;
  std::string path;
  std::string fnv1a64;  // 16 hex digits over the raw file bytes
};

// Run manifest: every listed artifact exists on disk after a successful
// command, and digests change exactly when the input bytes change.
struct ReportBundle {
  std::string run_id;
  std::vector<InputDigest> inputs;
  std::vector<Artifact> outputs;
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::string run_id;  // empty -> current UTC timestamp
};

struct ClusterOptions {
  int k = 4;
  std::uint64_t seed = 42;
  int restarts = 10;
  bool both_tariffs = false;  // add the tariff charged to the USA as a third feature
};

// Dataset rejected by validate_dataset; message lists every error.
class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(std::string_view bytes);

// OLS fit over (tariff charged to the USA, US reciprocal tariff) plus the
// scatter charts. Writes fit.json, regression.svg, tariff_vs_export.svg
// (log-scale export axis; countries without a positive export value are
// dropped with a notice) and report.json.
ReportBundle cmd_regress(const std::filesystem::path& data_csv, const RunOptions& run);

// K-means typology over (reciprocal tariff, ECI). Writes clusters.json,
// clusters.svg and report.json.
ReportBundle cmd_cluster(const std::filesystem::path& data_csv, const ClusterOptions& options,
                         const RunOptions& run);

// Demand-shift projection for a scenario file. Writes projection.json,
// shares.svg, cost_index.svg and report.json.
ReportBundle cmd_simulate(const std::filesystem::path& scenario_json, const RunOptions& run);

// Balancing-loop trajectory for the "cld" block of a scenario file. Writes
// trajectory.csv, cld.svg and report.json.
ReportBundle cmd_cld(const std::filesystem::path& config_json, const RunOptions& run);

}  // namespace tarifflab::report
