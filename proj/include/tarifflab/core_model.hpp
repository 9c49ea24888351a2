#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tarifflab::core {

// One country's tariff pair plus optional economic covariates. Percentages
// are stored exactly as they appear in the source file (46 means 46%);
// conversion to fractions happens inside the computation modules only.
struct CountryRecord {
  std::string name;
  double tariff_charged_to_usa = 0.0;  // percent, expected in [0, 1000)
  double usa_reciprocal_tariff = 0.0;  // percent, expected in [0, 1000)
  std::optional<double> eci;           // standardized index, may be negative
  std::optional<double> export_value_usd_billions;
  std::optional<double> coffee_share;  // percent of baseline US coffee imports

  bool operator==(const CountryRecord&) const = default;
};

// Ordered country table. Record order is preserved from the source file so
// repeated runs over the same input stay deterministic.
struct Dataset {
  std::vector<CountryRecord> records;
  std::string provenance;
};

struct Issue {
  std::size_t row = 0;  // record index within the dataset, 0-based
  std::string field;
  std::string message;

  bool operator==(const Issue&) const = default;
};

struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const { return errors.empty(); }
  bool operator==(const ValidationReport&) const = default;
};

// Structural CSV failure. `line` is the 1-based line number in the input
// text (the header is line 1); `column` names the offending column when the
// failure is tied to one.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string column, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t line_;
  std::string column_;
};

// Raised when an operation receives fewer usable records than it needs.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kRequiredColumns[] = {
    "country", "tariff_charged_to_usa_pct", "usa_reciprocal_tariff_pct"};
inline constexpr std::string_view kOptionalColumns[] = {
    "eci", "export_value_busd", "coffee_share_pct"};

// Parses the documented CSV schema. Columns may appear in any order;
// optional columns may be missing entirely; unknown columns are skipped and
// recorded as warnings when a report sink is supplied. Structural problems
// (missing required column, unbalanced quotes, wrong field count,
// non-numeric cells) throw ParseError.
Dataset parse_dataset(std::string_view csv_text,
                      std::string provenance = "inline",
                      ValidationReport* parse_warnings = nullptr);

// Canonical CSV emission; parse_dataset(serialize_dataset(d)) reproduces
// d.records exactly (doubles are printed with round-trip precision).
std::string serialize_dataset(const Dataset& dataset);

// Semantic checks. Errors: empty or duplicate names, tariffs outside
// [0, 1000), negative export values, coffee shares outside [0, 100],
// non-finite numbers. Warning: coffee shares present but summing outside
// [95, 105]. Always returns a report; callers reject datasets whose report
// has any error.
ValidationReport validate_dataset(const Dataset& dataset);

}  // namespace tarifflab::core
