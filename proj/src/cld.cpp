#include "tarifflab/cld.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tarifflab::cld {

namespace {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

CLDModel default_model() { return CLDModel{}; }

std::vector<std::string> validate_model(const CLDModel& model) {
  std::vector<std::string> violations;
  auto require = [&](bool ok, const char* field, const char* rule) {
    if (!ok) violations.push_back(std::string(field) + " " + rule);
  };
  require(std::isfinite(model.baseline_tariff) && model.baseline_tariff >= 0.0 &&
              model.baseline_tariff < 1000.0,
          "baseline_tariff", "must lie in [0, 1000)");
  require(std::isfinite(model.trade_sensitivity) && model.trade_sensitivity > 0.0,
          "trade_sensitivity", "must be positive");
  require(std::isfinite(model.revenue_coefficient) && model.revenue_coefficient > 0.0,
          "revenue_coefficient", "must be positive");
  require(std::isfinite(model.pressure_gain_b1) && model.pressure_gain_b1 >= 0.0,
          "pressure_gain_b1", "must be nonnegative");
  require(std::isfinite(model.pressure_gain_b2) && model.pressure_gain_b2 >= 0.0,
          "pressure_gain_b2", "must be nonnegative");
  require(std::isfinite(model.relief_rate) && model.relief_rate >= 0.0 &&
              model.relief_rate <= 1.0,
          "relief_rate", "must lie in [0, 1]");
  return violations;
}

CLDState step(const CLDState& state, const CLDModel& model) {
  CLDState next;
  next.trade_volume =
      std::max(0.0, 100.0 - model.trade_sensitivity * (state.tariff - model.baseline_tariff));
  next.exporter_revenue = model.revenue_coefficient * next.trade_volume;
  next.pressure = model.pressure_gain_b1 * std::max(0.0, 100.0 - next.exporter_revenue) +
                  model.pressure_gain_b2 * std::max(0.0, 100.0 - next.trade_volume);
  next.tariff = std::max(model.baseline_tariff, state.tariff - model.relief_rate * next.pressure);
  next.t = state.t + 1;
  return next;
}

std::vector<CLDState> simulate(const CLDModel& model, double shock, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(shock >= 0.0) || !std::isfinite(shock)) {
    throw std::invalid_argument("shock must be a nonnegative tariff increment");
  }
  if (auto violations = validate_model(model); !violations.empty()) {
    throw std::invalid_argument("invalid model: " + violations.front());
  }

  std::vector<CLDState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(horizon) + 1);
  CLDState state;
  state.t = 0;
  state.tariff = model.baseline_tariff + shock;
  state.trade_volume = 100.0;
  state.exporter_revenue = 100.0;
  state.pressure = 0.0;
  trajectory.push_back(state);
  for (int i = 0; i < horizon; ++i) {
    state = step(state, model);
    trajectory.push_back(state);
  }
  return trajectory;
}

std::string trajectory_to_csv(std::span<const CLDState> trajectory) {
  std::ostringstream out;
  out << "t,tariff,trade_volume,exporter_revenue,pressure\n";
  for (const auto& s : trajectory) {
    out << s.t << ',' << format_double(s.tariff) << ',' << format_double(s.trade_volume)
        << ',' << format_double(s.exporter_revenue) << ',' << format_double(s.pressure)
        << '\n';
  }
  return out.str();
}

CLDConfig config_from_json(const nlohmann::json& j) {
  CLDConfig config;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (!j.contains("cld")) {
    return config;  // all defaults
  }
  const auto& c = j.at("cld");
  if (!c.is_object()) throw std::invalid_argument("'cld' must be a JSON object");

  auto read = [&](const char* key, double& target) {
    if (!c.contains(key)) return;
    if (!c.at(key).is_number()) {
      throw std::invalid_argument(std::string("cld.") + key + " must be a number");
    }
    target = c.at(key).get<double>();
  };
  read("baseline_tariff", config.model.baseline_tariff);
  read("trade_sensitivity", config.model.trade_sensitivity);
  read("revenue_coefficient", config.model.revenue_coefficient);
  read("pressure_gain_b1", config.model.pressure_gain_b1);
  read("pressure_gain_b2", config.model.pressure_gain_b2);
  read("relief_rate", config.model.relief_rate);
  read("shock", config.shock);
  if (c.contains("horizon")) {
    if (!c.at("horizon").is_number_integer()) {
      throw std::invalid_argument("cld.horizon must be an integer");
    }
    config.horizon = c.at("horizon").get<int>();
  }

  if (auto violations = validate_model(config.model); !violations.empty()) {
    throw std::invalid_argument("cld." + violations.front());
  }
  if (!(config.shock >= 0.0) || !std::isfinite(config.shock)) {
    throw std::invalid_argument("cld.shock must be nonnegative");
  }
  if (config.horizon < 1) throw std::invalid_argument("cld.horizon must be >= 1");
  return config;
}

}  // namespace tarifflab::cld
