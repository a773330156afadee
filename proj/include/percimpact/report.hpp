#ifndef PERCIMPACT_REPORT_HPP_
#define PERCIMPACT_REPORT_HPP_

// Report documents: named tables plus replay metadata, rendered to CSV
// or JSON. Metadata always carries every stochastic input (seed, PRNG
// algorithm, profile parameters) so any run can be replayed exactly.
// Doubles are rendered shortest-round-trip, so equal numbers render to
// equal bytes and seeded runs produce byte-identical files.

#include <charconv>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace percimpact {

inline std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// 6 significant digits, for human-facing tables on stdout.
inline std::string format_sig6(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return std::string(buf);
}

struct ReportDocument {
  using Cell = std::variant<std::string, double>;

  struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
  };

  std::string title;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Table> tables;

  void add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  void add_meta(std::string key, double value) {
    metadata.emplace_back(std::move(key), format_double(value));
  }
};

inline std::string render_csv(const ReportDocument& doc) {
  std::string out;
  out += "# " + doc.title + "\n";
  for (const auto& [key, value] : doc.metadata) {
    out += "# " + key + " = " + value + "\n";
  }
  for (const ReportDocument::Table& table : doc.tables) {
    out += "# table: " + table.name + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (i) out += ',';
      out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        if (const double* d = std::get_if<double>(&row[i])) {
          out += format_double(*d);
        } else {
          out += std::get<std::string>(row[i]);
        }
      }
      out += '\n';
    }
  }
  return out;
}

inline std::string render_json(const ReportDocument& doc) {
  nlohmann::ordered_json root;
  root["title"] = doc.title;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : doc.metadata) meta[key] = value;
  root["metadata"] = std::move(meta);
  root["tables"] = nlohmann::ordered_json::array();
  for (const ReportDocument::Table& table : doc.tables) {
    nlohmann::ordered_json jt;
    jt["name"] = table.name;
    jt["columns"] = table.columns;
    jt["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json jr = nlohmann::ordered_json::array();
      for (const auto& cell : row) {
        if (const double* d = std::get_if<double>(&cell)) {
          jr.push_back(*d);
        } else {
          jr.push_back(std::get<std::string>(cell));
        }
      }
      jt["rows"].push_back(std::move(jr));
    }
    root["tables"].push_back(std::move(jt));
  }
  return root.dump(2) + "\n";
}

}  // namespace percimpact

#endif  // PERCIMPACT_REPORT_HPP_
