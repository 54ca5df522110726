#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "geh/errors.hpp"

namespace geh::output {

inline constexpr std::string_view kSchemaVersion = "geh-output/1";
inline constexpr std::string_view kProvenancePrefix = "# provenance.";

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;
using Field = std::pair<std::string, Cell>;

// One schema for every command. CSV and JSON carry the same content; only
// the provenance block may differ between otherwise identical runs.
struct OutputRecord {
  std::string schema_version{kSchemaVersion};
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Field> summary;
  std::vector<Field> provenance;
};

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_real(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, end};
}

inline std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_real(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      c);
}

inline void write_csv(const OutputRecord& rec, std::ostream& os) {
  os << "# schema_version=" << rec.schema_version << '\n';
  os << "# command=" << rec.command << '\n';
  for (const auto& [k, v] : rec.parameters) os << "# param." << k << '=' << v << '\n';
  for (std::size_t i = 0; i < rec.columns.size(); ++i) os << (i ? "," : "") << rec.columns[i];
  os << '\n';
  for (const auto& row : rec.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
  for (const auto& [k, v] : rec.summary) os << "# summary." << k << '=' << format_cell(v) << '\n';
  for (const auto& [k, v] : rec.provenance) os << kProvenancePrefix << k << '=' << format_cell(v) << '\n';
}

inline nlohmann::ordered_json to_json_value(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

inline nlohmann::ordered_json to_json(const OutputRecord& rec) {
  nlohmann::ordered_json j;
  j["schema_version"] = rec.schema_version;
  j["command"] = rec.command;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rec.parameters) j["parameters"][k] = v;
  j["columns"] = rec.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rec.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[rec.columns[i]] = to_json_value(row[i]);
    j["rows"].push_back(std::move(r));
  }
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rec.summary) j["summary"][k] = to_json_value(v);
  j["provenance"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rec.provenance) j["provenance"][k] = to_json_value(v);
  return j;
}

inline void write_json(const OutputRecord& rec, std::ostream& os) { os << to_json(rec).dump(2) << '\n'; }

// Parsed CSV file: cells stay textual; callers convert the columns they need.
struct CsvDocument {
  std::vector<std::pair<std::string, std::string>> meta;  // "# key=value" lines in order
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::string meta_value(std::string_view key) const {
    for (const auto& [k, v] : meta) {
      if (k == key) return v;
    }
    throw DomainError("missing CSV metadata key: " + std::string(key));
  }

  [[nodiscard]] std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw DomainError("missing CSV column: " + std::string(name));
  }
};

inline std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline CsvDocument parse_csv(std::istream& is) {
  CsvDocument doc;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw DomainError("malformed CSV metadata line");
      doc.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
    } else if (!header_seen) {
      doc.columns = split_commas(line);
      header_seen = true;
    } else if (!line.empty()) {
      doc.rows.push_back(split_commas(line));
      if (doc.rows.back().size() != doc.columns.size()) throw DomainError("CSV row width mismatch");
    }
  }
  return doc;
}

inline double parse_real(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DomainError("not a real number: " + std::string(text));
  }
  return v;
}

/// Everything except the provenance lines; identical for runs that differ only in workers.
inline std::string csv_payload(std::string_view csv) {
  std::string out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto nl = csv.find('\n', pos);
    if (nl == std::string_view::npos) nl = csv.size();
    const auto line = csv.substr(pos, nl - pos);
    if (line.rfind(kProvenancePrefix, 0) != 0) {
      out.append(line);
      out.push_back('\n');
    }
    pos = nl + 1;
  }
  return out;
}

}  // namespace geh::output
