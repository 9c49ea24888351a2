#include "tarifflab/report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tarifflab/cld.hpp"
#include "tarifflab/cluster.hpp"
#include "tarifflab/core_model.hpp"
#include "tarifflab/regress.hpp"
#include "tarifflab/svg.hpp"
#include "tarifflab/tariff_sim.hpp"

namespace tarifflab::report {

namespace {

namespace fs = std::filesystem;

// Matplotlib-style categorical palette, starting from the paper's four
// cluster hull colors.
const char* kClusterColors[] = {"#e0b400", "#7e57c2", "#43a047", "#1e88e5",
                                "#ef6c00", "#6d4c41", "#c2185b", "#00838f"};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_run_id() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

struct RunContext {
  fs::path out_dir;
  ReportBundle bundle;

  RunContext(const RunOptions& run) {
    out_dir = run.out_dir;
    fs::create_directories(out_dir);
    bundle.run_id = run.run_id.empty() ? utc_run_id() : run.run_id;
  }

  void add_input(const std::string& name, const fs::path& path, std::string_view bytes) {
    bundle.inputs.push_back({name, path.filename().string(), hex64(fnv1a64(bytes))});
  }

  void emit(const std::string& name, const std::string& kind, std::string_view content) {
    write_file(out_dir / name, content);
    bundle.outputs.push_back({name, kind});
    std::cerr << "wrote " << (out_dir / name).string() << '\n';
  }

  ReportBundle finalize() {
    nlohmann::ordered_json j;
    j["run_id"] = bundle.run_id;
    auto inputs = nlohmann::ordered_json::array();
    for (const auto& in : bundle.inputs) {
      inputs.push_back({{"name", in.name}, {"path", in.path}, {"fnv1a64", in.fnv1a64}});
    }
    j["inputs"] = std::move(inputs);
    auto outputs = nlohmann::ordered_json::array();
    for (const auto& out : bundle.outputs) {
      outputs.push_back({{"path", out.path}, {"kind", out.kind}});
    }
    j["outputs"] = std::move(outputs);
    write_file(out_dir / "report.json", j.dump(2) + "\n");
    return bundle;
  }
};

core::Dataset load_dataset(const fs::path& data_csv, RunContext& ctx) {
  const std::string text = read_file(data_csv);
  ctx.add_input("dataset", data_csv, text);

  core::ValidationReport parse_warnings;
  core::Dataset dataset = core::parse_dataset(text, data_csv.string(), &parse_warnings);
  for (const auto& w : parse_warnings.warnings) {
    std::cerr << "warning: " << w.message << '\n';
  }

  const auto report = core::validate_dataset(dataset);
  for (const auto& w : report.warnings) {
    std::cerr << "warning: row " << w.row << " " << w.field << ": " << w.message << '\n';
  }
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "dataset '" << data_csv.string() << "' failed validation:";
    for (const auto& e : report.errors) {
      msg << "\n  row " << e.row << " " << e.field << ": " << e.message;
    }
    throw ValidationFailure(msg.str());
  }
  return dataset;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

ReportBundle cmd_regress(const std::filesystem::path& data_csv, const RunOptions& run) {
  RunContext ctx(run);
  const core::Dataset dataset = load_dataset(data_csv, ctx);

  std::vector<regress::PointXY> points;
  points.reserve(dataset.records.size());
  for (const auto& rec : dataset.records) {
    points.push_back({rec.tariff_charged_to_usa, rec.usa_reciprocal_tariff});
  }
  const auto fit = regress::fit_ols(points);
  ctx.emit("fit.json", "json", dump(regress::fit_to_json(fit)));

  svg::ScatterSpec scatter;
  scatter.title = "Tariffs Charged to the USA vs. USA Reciprocal Tariffs";
  scatter.x_label = "Tariff charged to the USA (%)";
  scatter.y_label = "USA reciprocal tariff (%)";
  for (const auto& rec : dataset.records) {
    scatter.points.push_back(
        {rec.tariff_charged_to_usa, rec.usa_reciprocal_tariff, rec.name, "#1f77b4", 4.0});
  }
  scatter.guides.push_back({1.0, 0.0, "#999999", true, "equal tariffs (y = x)"});
  scatter.guides.push_back({0.5, 0.0, "#1f77b4", false, "discounted (y = 0.5x)"});
  scatter.guides.push_back({fit.slope, fit.intercept, "#d62728", false, "OLS fit"});
  ctx.emit("regression.svg", "svg", svg::scatter_chart(scatter));

  svg::ScatterSpec exports;
  exports.title = "USA Reciprocal Tariff vs. Export Value";
  exports.x_label = "USA reciprocal tariff (%)";
  exports.y_label = "Exports to the USA ($B, log scale)";
  exports.log_y = true;
  std::vector<std::string> dropped;
  for (const auto& rec : dataset.records) {
    if (rec.export_value_usd_billions && *rec.export_value_usd_billions > 0.0) {
      exports.points.push_back(
          {rec.usa_reciprocal_tariff, *rec.export_value_usd_billions, rec.name, "#2ca02c", 4.0});
    } else {
      dropped.push_back(rec.name);
    }
  }
  if (!dropped.empty()) {
    std::cerr << "warning: dropped from log-scale export chart (zero or missing value):";
    for (const auto& name : dropped) std::cerr << ' ' << name;
    std::cerr << '\n';
  }
  if (!exports.points.empty()) {
    ctx.emit("tariff_vs_export.svg", "svg", svg::scatter_chart(exports));
  } else {
    std::cerr << "warning: no positive export values; skipping tariff_vs_export.svg\n";
  }

  return ctx.finalize();
}

ReportBundle cmd_cluster(const std::filesystem::path& data_csv, const ClusterOptions& options,
                         const RunOptions& run) {
  RunContext ctx(run);
  const core::Dataset dataset = load_dataset(data_csv, ctx);

  const auto features =
      options.both_tariffs ? cluster::FeatureSet::both_tariffs_eci : cluster::FeatureSet::tariff_eci;
  const auto space = cluster::standardize(dataset, features);
  if (!space.excluded.empty()) {
    std::cerr << "warning: excluded (no ECI):";
    for (const auto& name : space.excluded) std::cerr << ' ' << name;
    std::cerr << '\n';
  }
  for (const auto& w : space.warnings) std::cerr << "warning: " << w << '\n';

  const auto model = cluster::kmeans(space.points, options.k, options.seed, options.restarts);
  ctx.emit("clusters.json", "json", dump(cluster::model_to_json(model)));

  svg::ScatterSpec chart;
  chart.title = "Country Clusters with Convex Hulls (Reciprocal Tariff vs ECI, k=" +
                std::to_string(options.k) + ")";
  chart.x_label = "USA reciprocal tariff (%)";
  chart.y_label = "Economic Complexity Index";
  const std::size_t ncolors = std::size(kClusterColors);
  for (std::size_t c = 0; c < static_cast<std::size_t>(model.k); ++c) {
    const std::string color = kClusterColors[c % ncolors];
    chart.hulls.push_back({model.hulls[c], color,
                           "Group " + std::to_string(c + 1) + ": " + model.labels[c]});
  }
  for (const auto& p : space.points) {
    const auto c = static_cast<std::size_t>(model.assignments.at(p.country));
    chart.points.push_back({p.raw_x, p.raw_y, p.country, kClusterColors[c % ncolors], 4.0});
  }
  ctx.emit("clusters.svg", "svg", svg::scatter_chart(chart));

  return ctx.finalize();
}

ReportBundle cmd_simulate(const std::filesystem::path& scenario_json, const RunOptions& run) {
  RunContext ctx(run);
  const std::string text = read_file(scenario_json);
  ctx.add_input("scenario", scenario_json, text);

  const auto j = nlohmann::json::parse(text);
  std::vector<std::string> warnings;
  const auto scenario = sim::scenario_from_json(j, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  const auto projection = sim::demand_shift(scenario);
  if (projection.no_substitute) {
    std::cerr << "note: no eligible substitute origin; shares unchanged\n";
  }
  ctx.emit("projection.json", "json", dump(sim::projection_to_json(projection)));
  std::cerr << "consumer price impact: " << svg::fmt(projection.weighted_price_change * 100.0)
            << "%\n";

  svg::BarSpec shares;
  shares.title = "Projected US Coffee Import Shares (focal: " + scenario.focal_origin + ")";
  shares.y_label = "share of US imports (%)";
  svg::BarSeries before{"before", "#7f7f7f", {}};
  svg::BarSeries after{"after", "#1f77b4", {}};
  for (const auto& origin : projection.origins) {
    shares.categories.push_back(origin.name);
    before.values.push_back(origin.baseline_share);
    after.values.push_back(origin.projected_share);
  }
  shares.series = {before, after};
  ctx.emit("shares.svg", "svg", svg::bar_chart(shares));

  svg::BarSpec cost;
  cost.title = "Relative Cost of Origins vs. " + scenario.focal_origin;
  cost.y_label = "cost index (base 100)";
  svg::BarSeries indices{"cost index", "#ef6c00", {}};
  double focal_index = 100.0;
  for (const auto& origin : projection.origins) {
    if (origin.name == scenario.focal_origin) {
      focal_index = origin.cost_index;
      continue;  // the focal origin appears as the reference line instead
    }
    cost.categories.push_back(origin.name);
    indices.values.push_back(origin.cost_index);
  }
  cost.series = {indices};
  cost.reference_line = focal_index;
  cost.reference_label =
      scenario.focal_origin + " cost index = " + svg::fmt(focal_index);
  ctx.emit("cost_index.svg", "svg", svg::bar_chart(cost));

  return ctx.finalize();
}

ReportBundle cmd_cld(const std::filesystem::path& config_json, const RunOptions& run) {
  RunContext ctx(run);
  const std::string text = read_file(config_json);
  ctx.add_input("scenario", config_json, text);

  const auto j = nlohmann::json::parse(text);
  const auto config = cld::config_from_json(j);
  const auto trajectory = cld::simulate(config.model, config.shock, config.horizon);
  ctx.emit("trajectory.csv", "csv", cld::trajectory_to_csv(trajectory));

  svg::LineSpec chart;
  chart.title = "Tariff Shock and Balancing Response";
  chart.x_label = "step";
  chart.y_label = "index / percent";
  svg::LineSeries tariff{"tariff (%)", "#d62728", {}};
  svg::LineSeries volume{"trade volume (index)", "#1f77b4", {}};
  for (const auto& s : trajectory) {
    tariff.values.push_back(s.tariff);
    volume.values.push_back(s.trade_volume);
  }
  chart.series = {tariff, volume};
  ctx.emit("cld.svg", "svg", svg::line_chart(chart));

  return ctx.finalize();
}

}  // namespace tarifflab::report
