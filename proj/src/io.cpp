#include "effdf/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "effdf/error.hpp"

namespace effdf::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parse_real(std::string_view s, const std::string& where, const char* field) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw InputError(where + ": " + field + " is not a number: '" + std::string(s) + "'");
  return v;
}

int parse_df(double v, const std::string& where) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) throw InputError(where + ": df must be a positive integer");
  return static_cast<int>(v);
}

void push_component(std::vector<VarianceComponent>& out, double w, double s2, double df, const std::string& where) {
  if (w == 0.0) return;
  const int nu = parse_df(df, where);
  try {
    out.emplace_back(w, s2, nu);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<VarianceComponent> parse_components_csv(std::string_view text) {
  std::vector<VarianceComponent> out;
  bool have_header = false;
  int col_w = -1, col_s2 = -1, col_df = -1;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;

    const auto fields = split_csv_record(line);
    const std::string where = "line " + std::to_string(line_no);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = lower(trim(fields[i]));
        if (name == "weight") col_w = static_cast<int>(i);
        if (name == "s2") col_s2 = static_cast<int>(i);
        if (name == "df") col_df = static_cast<int>(i);
      }
      if (col_w < 0 || col_s2 < 0 || col_df < 0)
        throw InputError(where + ": header must name columns weight,s2,df");
      have_header = true;
      continue;
    }
    const auto need = static_cast<std::size_t>(std::max({col_w, col_s2, col_df}));
    if (fields.size() <= need) throw InputError(where + ": expected " + std::to_string(need + 1) + " fields");
    push_component(out, parse_real(fields[col_w], where, "weight"), parse_real(fields[col_s2], where, "s2"),
                   parse_real(fields[col_df], where, "df"), where);
  }
  if (out.empty()) throw InputError("no components");
  return out;
}

std::vector<VarianceComponent> parse_components_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("JSON component file must be an array");
  std::vector<VarianceComponent> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& row = doc[i];
    const std::string where = "element " + std::to_string(i + 1);
    if (!row.is_object()) throw InputError(where + ": expected an object");
    auto number = [&](const char* key) {
      if (!row.contains(key) || !row[key].is_number()) throw InputError(where + ": missing numeric '" + key + "'");
      return row[key].get<double>();
    };
    push_component(out, number("weight"), number("s2"), number("df"), where);
  }
  if (out.empty()) throw InputError("no components");
  return out;
}

std::vector<VarianceComponent> parse_components(std::string_view text) {
  const std::string_view t = trim(text);
  if (!t.empty() && t.front() == '[') return parse_components_json(text);
  return parse_components_csv(text);
}

std::vector<VarianceComponent> read_component_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_components(ss.str());
}

std::string write_components_csv(const std::vector<VarianceComponent>& components) {
  std::string out = "weight,s2,df\n";
  for (const auto& c : components)
    out += format_double(c.weight()) + "," + format_double(c.s2()) + "," + std::to_string(c.df()) + "\n";
  return out;
}

Format parse_format(std::string_view name) {
  const std::string n = lower(name);
  if (n == "csv") return Format::Csv;
  if (n == "markdown" || n == "md") return Format::Markdown;
  if (n == "json") return Format::Json;
  throw InputError("unknown format '" + std::string(name) + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string text_of(const Value& v, Format f) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  const double d = std::get<double>(v);
  if (f != Format::Markdown || !std::isfinite(d)) return format_double(d);
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << d;
  return os.str();
}

nlohmann::json json_of(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<long long>(&v)) return *i;
  const double d = std::get<double>(v);
  if (!std::isfinite(d)) return nullptr;
  return d;
}

}  // namespace

void render(const Table& table, Format format, std::ostream& out) {
  switch (format) {
    case Format::Csv: {
      for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_escape(table.columns[i]);
      out << "\r\n";
      for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(text_of(row[i], format));
        out << "\r\n";
      }
      break;
    }
    case Format::Markdown: {
      out << "|";
      for (const auto& c : table.columns) out << " " << c << " |";
      out << "\n|";
      for (std::size_t i = 0; i < table.columns.size(); ++i) out << "---|";
      out << "\n";
      for (const auto& row : table.rows) {
        out << "|";
        for (const auto& v : row) out << " " << text_of(v, format) << " |";
        out << "\n";
      }
      break;
    }
    case Format::Json: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) obj[table.columns[i]] = json_of(row[i]);
        arr.push_back(std::move(obj));
      }
      out << arr.dump(2) << "\n";
      break;
    }
  }
}

}  // namespace effdf::io
