#include "tarifflab/core_model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace tarifflab::core {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

// Splits one physical line into fields, honoring RFC-style quoting
// ("" escapes a quote inside a quoted field).
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur += c;
      }
    } else {
      if (c == '"' && cur.empty()) {
        in_quotes = true;
      } else if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    ++i;
  }
  if (in_quotes) {
    throw ParseError(line_no, "", "unbalanced quote");
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& raw, std::size_t line_no, const std::string& column) {
  const std::string s = trim(raw);
  if (s.empty()) {
    throw ParseError(line_no, column, "empty value in numeric column '" + column + "'");
  }
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line_no, column,
                     "non-numeric value '" + s + "' in column '" + column + "'");
  }
  return value;
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote_field(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

}  // namespace

ParseError::ParseError(std::size_t line, std::string column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) +
                         (column.empty() ? "" : ", column '" + column + "'") + ": " + message),
      line_(line),
      column_(std::move(column)) {}

Dataset parse_dataset(std::string_view csv_text, std::string provenance,
                      ValidationReport* parse_warnings) {
  // Strip a UTF-8 BOM if the file carries one.
  if (csv_text.size() >= 3 && csv_text.substr(0, 3) == "\xef\xbb\xbf") {
    csv_text.remove_prefix(3);
  }

  std::vector<std::pair<std::size_t, std::string_view>> lines;  // (line_no, text)
  {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= csv_text.size()) {
      std::size_t nl = csv_text.find('\n', pos);
      std::string_view line = (nl == std::string_view::npos)
                                  ? csv_text.substr(pos)
                                  : csv_text.substr(pos, nl - pos);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) lines.emplace_back(line_no, line);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }

  if (lines.empty()) {
    throw ParseError(1, "", "missing header row");
  }

  const auto header = split_csv_line(lines.front().second, lines.front().first);
  std::map<std::string, std::size_t> column_of;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = trim(header[i]);
    bool known = false;
    for (auto req : kRequiredColumns) known = known || name == req;
    for (auto opt : kOptionalColumns) known = known || name == opt;
    if (!known) {
      if (parse_warnings) {
        parse_warnings->warnings.push_back(
            {0, name, "unknown column '" + name + "' ignored"});
      }
      continue;
    }
    if (!column_of.emplace(name, i).second) {
      throw ParseError(lines.front().first, name, "duplicate column '" + name + "'");
    }
  }
  for (auto req : kRequiredColumns) {
    if (!column_of.count(std::string(req))) {
      throw ParseError(lines.front().first, std::string(req),
                       "missing required column '" + std::string(req) + "'");
    }
  }

  Dataset dataset;
  dataset.provenance = std::move(provenance);

  auto cell = [&](const std::vector<std::string>& fields, std::string_view column)
      -> const std::string* {
    auto it = column_of.find(std::string(column));
    if (it == column_of.end()) return nullptr;  // column absent from header
    return &fields[it->second];
  };

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto [line_no, text] = lines[li];
    const auto fields = split_csv_line(text, line_no);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "",
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }

    CountryRecord rec;
    rec.name = trim(*cell(fields, "country"));
    rec.tariff_charged_to_usa =
        parse_number(*cell(fields, "tariff_charged_to_usa_pct"), line_no,
                     "tariff_charged_to_usa_pct");
    rec.usa_reciprocal_tariff =
        parse_number(*cell(fields, "usa_reciprocal_tariff_pct"), line_no,
                     "usa_reciprocal_tariff_pct");

    auto optional_cell = [&](std::string_view column) -> std::optional<double> {
      const std::string* raw = cell(fields, column);
      if (raw == nullptr || trim(*raw).empty()) return std::nullopt;
      return parse_number(*raw, line_no, std::string(column));
    };
    rec.eci = optional_cell("eci");
    rec.export_value_usd_billions = optional_cell("export_value_busd");
    rec.coffee_share = optional_cell("coffee_share_pct");

    dataset.records.push_back(std::move(rec));
  }
  return dataset;
}

std::string serialize_dataset(const Dataset& dataset) {
  std::ostringstream out;
  out << "country,tariff_charged_to_usa_pct,usa_reciprocal_tariff_pct,"
         "eci,export_value_busd,coffee_share_pct\n";
  for (const auto& rec : dataset.records) {
    out << quote_field(rec.name) << ',' << format_double(rec.tariff_charged_to_usa) << ','
        << format_double(rec.usa_reciprocal_tariff) << ',' << format_optional(rec.eci) << ','
        << format_optional(rec.export_value_usd_billions) << ','
        << format_optional(rec.coffee_share) << '\n';
  }
  return out.str();
}

ValidationReport validate_dataset(const Dataset& dataset) {
  ValidationReport report;
  std::set<std::string> seen;

  auto check_finite = [&](std::size_t row, const char* field, double v) {
    if (!std::isfinite(v)) {
      report.errors.push_back({row, field, "value is not finite"});
      return false;
    }
    return true;
  };

  double share_sum = 0.0;
  std::optional<std::size_t> first_share_row;

  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& rec = dataset.records[i];

    if (rec.name.empty()) {
      report.errors.push_back({i, "country", "empty country name"});
    } else if (!seen.insert(rec.name).second) {
      report.errors.push_back({i, "country", "duplicate country name '" + rec.name + "'"});
    }

    auto check_tariff = [&](const char* field, double v) {
      if (!check_finite(i, field, v)) return;
      if (v < 0.0) {
        report.errors.push_back({i, field, "negative tariff"});
      } else if (v >= 1000.0) {
        report.errors.push_back({i, field, "tariff outside [0, 1000)"});
      }
    };
    check_tariff("tariff_charged_to_usa_pct", rec.tariff_charged_to_usa);
    check_tariff("usa_reciprocal_tariff_pct", rec.usa_reciprocal_tariff);

    if (rec.eci) check_finite(i, "eci", *rec.eci);

    if (rec.export_value_usd_billions) {
      if (check_finite(i, "export_value_busd", *rec.export_value_usd_billions) &&
          *rec.export_value_usd_billions < 0.0) {
        report.errors.push_back({i, "export_value_busd", "negative export value"});
      }
    }

    if (rec.coffee_share) {
      if (check_finite(i, "coffee_share_pct", *rec.coffee_share)) {
        if (*rec.coffee_share < 0.0 || *rec.coffee_share > 100.0) {
          report.errors.push_back({i, "coffee_share_pct", "share outside [0, 100]"});
        }
        share_sum += *rec.coffee_share;
        if (!first_share_row) first_share_row = i;
      }
    }
  }

  // Baseline shares are approximate by nature; tolerate a 5-point band
  // around 100 before warning.
  if (first_share_row && (share_sum < 95.0 || share_sum > 105.0)) {
    std::ostringstream msg;
    msg << "coffee shares sum to " << share_sum << ", outside [95, 105]";
    report.warnings.push_back({*first_share_row, "coffee_share_pct", msg.str()});
  }

  return report;
}

}  // namespace tarifflab::core
