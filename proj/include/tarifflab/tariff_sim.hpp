#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace tarifflab::sim {

// Demand elasticity is stored as a positive magnitude; quantity responses
// apply the negative sign.
struct ElasticityParams {
  double ped_magnitude = 1.5;
  double pass_through = 0.75;  // fraction of the tariff reaching prices
};

enum class Redistribution {
  cheaper_only,  // only origins strictly cheaper than the focal one gain
  all_others,    // every non-focal origin gains
};

struct Origin {
  std::string name;
  double baseline_share = 0.0;  // percent of US imports
  double tariff = 0.0;          // percent
};

struct TariffScenario {
  std::vector<Origin> origins;
  std::string focal_origin;
  ElasticityParams params;
  Redistribution redistribution = Redistribution::cheaper_only;
};

struct OriginProjection {
  std::string name;
  double baseline_share = 0.0;
  double projected_share = 0.0;
  double price_change = 0.0;  // fraction
  double cost_index = 100.0;  // base 100
};

struct MarketShareProjection {
  std::vector<OriginProjection> origins;  // scenario order preserved
  double focal_loss = 0.0;                // percentage points shed by the focal origin
  double weighted_price_change = 0.0;     // share-weighted, post-shift
  // Set when no eligible origin could absorb the loss (empty eligible set
  // or zero aggregate baseline share); shares then stay at baseline.
  bool no_substitute = false;
};

// Price/quantity indices with a base of 100.
struct ScenarioState {
  double price_index = 100.0;
  double quantity_index = 100.0;
};

// Scenario failed validation; violations() lists every broken rule.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// (tariff/100) * pass_through. Throws std::domain_error for negative tariffs
// or pass-through outside [0, 1].
double price_change(double tariff_pct, double pass_through);

// 100 * (1 + price_change); price changes below -1 would mean negative
// prices and throw std::domain_error.
double cost_index(double price_change);

// -min(1, |PED| * price_change): percentage demand loss, capped at -100%.
// Tariff shocks only, so negative price changes throw std::domain_error.
double quantity_response(const ElasticityParams& params, double price_change);

// Empty when the scenario satisfies every type invariant.
std::vector<std::string> validate_scenario(const TariffScenario& scenario);

// Single-focal demand shift: the focal origin loses share according to its
// quantity response and the loss is redistributed over the eligible set in
// proportion to baseline shares. Throws ScenarioError when validation fails.
MarketShareProjection demand_shift(const TariffScenario& scenario);

// Share-weighted average import price change over the projected shares.
double consumer_price_impact(const MarketShareProjection& projection);

// Applies one tariff shock to a base-100 price/quantity state.
ScenarioState apply_shock(const ScenarioState& state, double tariff_pct,
                          const ElasticityParams& params);

// Reads {"focal", "ped", "pass_through", "redistribution", "origins":
// [{"name", "share", "tariff"}, ...]}. Baseline shares that do not sum to
// 100 are renormalized with a note in *warnings. Unknown keys (for example a
// "cld" block riding along in the same file) are ignored. Structural or
// semantic problems throw ScenarioError.
TariffScenario scenario_from_json(const nlohmann::json& j,
                                  std::vector<std::string>* warnings = nullptr);

// Mirrors MarketShareProjection plus the no_substitute flag.
nlohmann::ordered_json projection_to_json(const MarketShareProjection& projection);

}  // namespace tarifflab::sim
