#include "output.hpp"

#include <charconv>
#include <cmath>
#include <istream>

#include <json.hpp>

namespace spinpcd::cli {

const std::string* OutputRecord::find_meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(const OutputRecord& record, std::ostream& os) {
  for (const auto& [k, v] : record.metadata) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < record.columns.size(); ++i) os << (i ? "," : "") << record.columns[i];
  os << '\n';
  for (const auto& row : record.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_json(const OutputRecord& record, std::ostream& os) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : record.metadata) j["metadata"][k] = v;
  j["columns"] = record.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : record.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no NaN/inf; keep the CSV spelling as a string.
        if (std::isfinite(*d)) r.push_back(*d);
        else r.push_back(format_number(*d));
      } else if (const auto* i = std::get_if<long long>(&c)) {
        r.push_back(*i);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  os << j.dump(1) << '\n';
}

OutputRecord read_csv_metadata(std::istream& is) {
  OutputRecord out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) != 0) break;
    const auto colon = line.find(": ", 2);
    if (colon == std::string::npos) continue;
    out.meta(line.substr(2, colon - 2), line.substr(colon + 2));
  }
  return out;
}

}  // namespace spinpcd::cli
