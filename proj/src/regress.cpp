#include "tarifflab/regress.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "tarifflab/core_model.hpp"

namespace tarifflab::regress {

RegressionFit fit_ols(std::span<const PointXY> points) {
  const std::size_t n = points.size();
  if (n < 2) {
    throw core::InsufficientData("regression needs at least 2 points, got " +
                                 std::to_string(n));
  }

  double x_mean = 0.0, y_mean = 0.0;
  for (const auto& p : points) {
    x_mean += p.x;
    y_mean += p.y;
  }
  x_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = p.x - x_mean;
    const double dy = p.y - y_mean;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw DegenerateDesign("all x values identical; slope is undefined");
  }

  RegressionFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;

  fit.residuals.reserve(n);
  double ssr = 0.0;
  for (const auto& p : points) {
    const double r = p.y - (fit.intercept + fit.slope * p.x);
    fit.residuals.push_back(r);
    ssr += r * r;
  }

  if (syy == 0.0) {
    // Constant y: SST = 0 and the usual 1 - SSR/SST is 0/0. Defined as 0.
    fit.r_squared = 0.0;
    fit.degenerate_fit = true;
  } else {
    fit.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
  }
  return fit;
}

DiscountAssessment assess_reciprocity(const RegressionFit& fit) {
  DiscountAssessment a;
  a.slope = fit.slope;
  a.is_discounted = fit.slope < 1.0;
  a.discount_factor = 1.0 - fit.slope;
  return a;
}

nlohmann::ordered_json fit_to_json(const RegressionFit& fit) {
  const DiscountAssessment a = assess_reciprocity(fit);
  nlohmann::ordered_json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["n"] = fit.n;
  j["is_discounted"] = a.is_discounted;
  j["discount_factor"] = a.discount_factor;
  return j;
}

}  // namespace tarifflab::regress
