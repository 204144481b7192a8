#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace spinpcd::cli {

using Cell = std::variant<double, long long, std::string>;

/// A self-describing table: ordered metadata key/value pairs plus rows.
struct OutputRecord {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  const std::string* find_meta(const std::string& key) const;
};

/// 17 significant digits, shortest general form; round-trips a double.
std::string format_number(double v);

/// "#"-prefixed "key: value" lines, a header row, then comma-separated rows.
void write_csv(const OutputRecord& record, std::ostream& os);
void write_json(const OutputRecord& record, std::ostream& os);

/// Parses the metadata block of a CSV produced by write_csv.
OutputRecord read_csv_metadata(std::istream& is);

}  // namespace spinpcd::cli
