#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "effdf/estimators.hpp"

namespace effdf::io {

// Component files: CSV with header "weight,s2,df", or a JSON array of
// {"weight": .., "s2": .., "df": ..}. Rows with weight 0 are dropped.
// Errors are InputError with the offending line (CSV) or element (JSON).
std::vector<VarianceComponent> parse_components_csv(std::string_view text);
std::vector<VarianceComponent> parse_components_json(std::string_view text);
// JSON if the first non-blank character is '[', CSV otherwise.
std::vector<VarianceComponent> parse_components(std::string_view text);
std::vector<VarianceComponent> read_component_file(const std::string& path);

std::string write_components_csv(const std::vector<VarianceComponent>& components);

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_record(std::string_view line);
std::string csv_escape(std::string_view field);

enum class Format { Csv, Markdown, Json };
Format parse_format(std::string_view name);

using Value = std::variant<std::string, long long, double>;

// A rectangular result set rendered in any Format. CSV and JSON print doubles
// at full round-trip precision; markdown prints two decimals.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

void render(const Table& table, Format format, std::ostream& out);
std::string format_double(double v);

}  // namespace effdf::io
