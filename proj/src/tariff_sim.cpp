#include "tarifflab/tariff_sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tarifflab::sim {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

constexpr double kShareSumTolerance = 1e-6;

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> violations)
    : std::runtime_error("invalid scenario: " + join(violations)),
      violations_(std::move(violations)) {}

double price_change(double tariff_pct, double pass_through) {
  if (tariff_pct < 0.0) throw std::domain_error("tariff must be nonnegative");
  if (pass_through < 0.0 || pass_through > 1.0) {
    throw std::domain_error("pass-through must lie in [0, 1]");
  }
  return tariff_pct / 100.0 * pass_through;
}

double cost_index(double price_change) {
  if (price_change < -1.0) {
    throw std::domain_error("price change below -100% implies a negative price");
  }
  return 100.0 * (1.0 + price_change);
}

double quantity_response(const ElasticityParams& params, double price_change) {
  if (params.ped_magnitude <= 0.0) throw std::domain_error("PED magnitude must be positive");
  if (price_change < 0.0) {
    throw std::domain_error("quantity_response models tariff shocks; price change must be >= 0");
  }
  return -std::min(1.0, params.ped_magnitude * price_change);
}

std::vector<std::string> validate_scenario(const TariffScenario& scenario) {
  std::vector<std::string> violations;
  if (scenario.origins.empty()) {
    violations.push_back("scenario has no origins");
    return violations;
  }

  std::set<std::string> names;
  double share_sum = 0.0;
  bool focal_found = false;
  for (const auto& origin : scenario.origins) {
    if (origin.name.empty()) violations.push_back("origin with empty name");
    if (!names.insert(origin.name).second) {
      violations.push_back("duplicate origin '" + origin.name + "'");
    }
    if (!std::isfinite(origin.baseline_share) || origin.baseline_share < 0.0) {
      violations.push_back("origin '" + origin.name + "' has an invalid baseline share");
    }
    if (!std::isfinite(origin.tariff) || origin.tariff < 0.0) {
      violations.push_back("origin '" + origin.name + "' has an invalid tariff");
    }
    share_sum += origin.baseline_share;
    focal_found = focal_found || origin.name == scenario.focal_origin;
  }
  if (!focal_found) {
    violations.push_back("focal origin '" + scenario.focal_origin + "' is not listed");
  }
  if (std::abs(share_sum - 100.0) > kShareSumTolerance) {
    std::ostringstream msg;
    msg << "baseline shares sum to " << share_sum << ", expected 100";
    violations.push_back(msg.str());
  }
  if (!(scenario.params.ped_magnitude > 0.0)) {
    violations.push_back("PED magnitude must be positive");
  }
  if (!(scenario.params.pass_through >= 0.0 && scenario.params.pass_through <= 1.0)) {
    violations.push_back("pass-through must lie in [0, 1]");
  }
  return violations;
}

MarketShareProjection demand_shift(const TariffScenario& scenario) {
  if (auto violations = validate_scenario(scenario); !violations.empty()) {
    throw ScenarioError(std::move(violations));
  }

  MarketShareProjection projection;
  std::size_t focal_idx = 0;
  for (std::size_t i = 0; i < scenario.origins.size(); ++i) {
    const auto& origin = scenario.origins[i];
    OriginProjection p;
    p.name = origin.name;
    p.baseline_share = origin.baseline_share;
    p.projected_share = origin.baseline_share;
    p.price_change = price_change(origin.tariff, scenario.params.pass_through);
    p.cost_index = cost_index(p.price_change);
    if (origin.name == scenario.focal_origin) focal_idx = i;
    projection.origins.push_back(std::move(p));
  }

  const auto& focal = projection.origins[focal_idx];
  const double loss = focal.baseline_share *
                      -quantity_response(scenario.params, focal.price_change);

  double eligible_share_sum = 0.0;
  std::vector<bool> eligible(projection.origins.size(), false);
  for (std::size_t i = 0; i < projection.origins.size(); ++i) {
    if (i == focal_idx) continue;
    const bool in = scenario.redistribution == Redistribution::all_others ||
                    projection.origins[i].cost_index < focal.cost_index;
    eligible[i] = in;
    if (in) eligible_share_sum += projection.origins[i].baseline_share;
  }

  // An eligible set with zero aggregate baseline share cannot absorb the
  // loss either; both cases leave the shares untouched.
  if (eligible_share_sum <= 0.0) {
    projection.no_substitute = true;
    projection.focal_loss = 0.0;
  } else {
    projection.focal_loss = loss;
    projection.origins[focal_idx].projected_share = std::max(0.0, focal.baseline_share - loss);
    for (std::size_t i = 0; i < projection.origins.size(); ++i) {
      if (!eligible[i]) continue;
      projection.origins[i].projected_share +=
          loss * projection.origins[i].baseline_share / eligible_share_sum;
    }
  }

  projection.weighted_price_change = consumer_price_impact(projection);
  return projection;
}

double consumer_price_impact(const MarketShareProjection& projection) {
  double impact = 0.0;
  for (const auto& origin : projection.origins) {
    impact += origin.projected_share / 100.0 * origin.price_change;
  }
  return impact;
}

ScenarioState apply_shock(const ScenarioState& state, double tariff_pct,
                          const ElasticityParams& params) {
  const double pc = price_change(tariff_pct, params.pass_through);
  ScenarioState next;
  next.price_index = state.price_index * (1.0 + pc);
  next.quantity_index = state.quantity_index * (1.0 + quantity_response(params, pc));
  return next;
}

TariffScenario scenario_from_json(const nlohmann::json& j,
                                  std::vector<std::string>* warnings) {
  std::vector<std::string> violations;
  if (!j.is_object()) {
    throw ScenarioError({"scenario must be a JSON object"});
  }
  for (const char* key : {"focal", "ped", "pass_through", "origins"}) {
    if (!j.contains(key)) violations.push_back(std::string("missing key '") + key + "'");
  }
  if (!violations.empty()) throw ScenarioError(std::move(violations));

  TariffScenario scenario;
  try {
    scenario.focal_origin = j.at("focal").get<std::string>();
    scenario.params.ped_magnitude = j.at("ped").get<double>();
    scenario.params.pass_through = j.at("pass_through").get<double>();
    if (j.contains("redistribution")) {
      const auto mode = j.at("redistribution").get<std::string>();
      if (mode == "cheaper_only") {
        scenario.redistribution = Redistribution::cheaper_only;
      } else if (mode == "all_others") {
        scenario.redistribution = Redistribution::all_others;
      } else {
        throw ScenarioError({"unknown redistribution mode '" + mode + "'"});
      }
    }
    for (const auto& item : j.at("origins")) {
      Origin origin;
      origin.name = item.at("name").get<std::string>();
      origin.baseline_share = item.at("share").get<double>();
      origin.tariff = item.at("tariff").get<double>();
      scenario.origins.push_back(std::move(origin));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError({std::string("malformed scenario JSON: ") + e.what()});
  }

  // Approximate share tables are accepted: renormalize to a 100 total and
  // surface a notice rather than failing the run.
  double share_sum = 0.0;
  bool shares_valid = true;
  for (const auto& origin : scenario.origins) {
    share_sum += origin.baseline_share;
    shares_valid = shares_valid && std::isfinite(origin.baseline_share) &&
                   origin.baseline_share >= 0.0;
  }
  if (shares_valid && share_sum > 0.0 && std::abs(share_sum - 100.0) > kShareSumTolerance) {
    for (auto& origin : scenario.origins) {
      origin.baseline_share *= 100.0 / share_sum;
    }
    if (warnings) {
      std::ostringstream msg;
      msg << "baseline shares sum to " << share_sum << "; renormalized to 100";
      warnings->push_back(msg.str());
    }
  }

  if (auto remaining = validate_scenario(scenario); !remaining.empty()) {
    throw ScenarioError(std::move(remaining));
  }
  return scenario;
}

nlohmann::ordered_json projection_to_json(const MarketShareProjection& projection) {
  nlohmann::ordered_json j;
  auto origins = nlohmann::ordered_json::array();
  for (const auto& origin : projection.origins) {
    nlohmann::ordered_json entry;
    entry["name"] = origin.name;
    entry["baseline_share"] = origin.baseline_share;
    entry["projected_share"] = origin.projected_share;
    entry["price_change"] = origin.price_change;
    entry["cost_index"] = origin.cost_index;
    origins.push_back(std::move(entry));
  }
  j["origins"] = std::move(origins);
  j["focal_loss"] = projection.focal_loss;
  j["weighted_price_change"] = projection.weighted_price_change;
  j["no_substitute"] = projection.no_substitute;
  return j;
}

}  // namespace tarifflab::sim
