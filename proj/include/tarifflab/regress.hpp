#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace tarifflab::regress {

struct PointXY {
  double x = 0.0;  // partner tariff charged to the USA, percent
  double y = 0.0;  // proposed US reciprocal tariff, percent
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;  // percent
  double r_squared = 0.0;  // in [0, 1]; 0 when total variance is 0
  std::vector<double> residuals;
  std::size_t n = 0;
  // True when total variance was zero and r_squared fell back to the
  // defined-as-zero convention.
  bool degenerate_fit = false;
};

struct DiscountAssessment {
  double slope = 0.0;
  bool is_discounted = false;   // slope < 1
  double discount_factor = 0.0;  // 1 - slope
};

// All sample x values identical: the design matrix is singular.
class DegenerateDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed-form ordinary least squares with fitted intercept. Throws
// core::InsufficientData for n < 2 and DegenerateDesign when every x is
// identical.
RegressionFit fit_ols(std::span<const PointXY> points);

DiscountAssessment assess_reciprocity(const RegressionFit& fit);

// {"slope", "intercept", "r_squared", "n", "is_discounted", "discount_factor"}
nlohmann::ordered_json fit_to_json(const RegressionFit& fit);

}  // namespace tarifflab::regress
