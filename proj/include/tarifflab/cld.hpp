#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace tarifflab::cld {

// Parameters of the tariff / trade-volume / exporter-revenue / pressure
// recurrence. The two balancing channels are the revenue shortfall (B1) and
// the trade-volume shortfall (B2); both feed political pressure that erodes
// the tariff back toward its baseline.
struct CLDModel {
  double baseline_tariff = 0.0;     // percent
  double trade_sensitivity = 1.0;   // volume index points lost per tariff point
  double revenue_coefficient = 1.0; // revenue index per volume index
  double pressure_gain_b1 = 0.02;   // pressure per revenue shortfall point
  double pressure_gain_b2 = 0.02;   // pressure per volume shortfall point
  double relief_rate = 0.5;         // tariff points removed per pressure unit
};

struct CLDState {
  int t = 0;
  double tariff = 0.0;             // percent
  double trade_volume = 100.0;     // base-100 index, floored at 0
  double exporter_revenue = 100.0; // base-100 index, floored at 0
  double pressure = 0.0;           // nonnegative

  bool operator==(const CLDState&) const = default;
};

// Documented defaults; chosen so the linearized recurrence is a contraction
// (spectral radius 0.98) and a 46-point shock decays within ~200 steps.
CLDModel default_model();

// Empty when the model parameters lie in their documented domains; each
// entry names the offending field.
std::vector<std::string> validate_model(const CLDModel& model);

// One synchronous update: volume responds to the tariff gap, revenue tracks
// volume, both shortfalls feed pressure, and pressure relieves the tariff
// (never below baseline).
CLDState step(const CLDState& state, const CLDModel& model);

// Shock the baseline fixed point at step 0 and iterate. Returns horizon + 1
// states. Throws std::invalid_argument for horizon < 1 or a negative shock.
std::vector<CLDState> simulate(const CLDModel& model, double shock, int horizon);

// CSV with header t,tariff,trade_volume,exporter_revenue,pressure.
std::string trajectory_to_csv(std::span<const CLDState> trajectory);

struct CLDConfig {
  CLDModel model;
  double shock = 46.0;
  int horizon = 200;
};

// Reads the optional "cld" object of a scenario JSON; absent keys keep their
// defaults. Throws std::invalid_argument naming the field on bad values.
CLDConfig config_from_json(const nlohmann::json& j);

}  // namespace tarifflab::cld
