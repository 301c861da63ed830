#include "steinerlab/check.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace steinerlab {

CheckRecord CheckRecord::leq(std::string name, double lhs, double rhs, double tolerance,
                             std::string anchor) {
  CheckRecord rec;
  rec.name = std::move(name);
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.tolerance = tolerance;
  rec.passed = lhs <= rhs + tolerance;
  rec.anchor = std::move(anchor);
  rec.metadata["comparison"] = "lhs <= rhs + tolerance";
  return rec;
}

CheckRecord CheckRecord::info(std::string name, double value, std::string anchor) {
  CheckRecord rec;
  rec.name = std::move(name);
  rec.lhs = value;
  rec.rhs = value;
  rec.tolerance = 0.0;
  rec.passed = true;
  rec.anchor = std::move(anchor);
  rec.metadata["comparison"] = "informational";
  return rec;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void sort_records(std::vector<CheckRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
}

std::string records_to_csv(std::vector<CheckRecord> records) {
  sort_records(records);
  std::string out = "name,lhs,rhs,tolerance,passed\n";
  for (const CheckRecord& r : records) {
    out += r.name;
    out += ',';
    out += format_double(r.lhs);
    out += ',';
    out += format_double(r.rhs);
    out += ',';
    out += format_double(r.tolerance);
    out += ',';
    out += r.passed ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string records_to_json(std::vector<CheckRecord> records) {
  sort_records(records);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CheckRecord& r : records) {
    nlohmann::ordered_json item;
    item["name"] = r.name;
    item["lhs"] = r.lhs;
    item["rhs"] = r.rhs;
    item["tolerance"] = r.tolerance;
    item["passed"] = r.passed;
    item["anchor"] = r.anchor;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    item["metadata"] = meta;
    arr.push_back(item);
  }
  return arr.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string series_to_csv(const std::string& xname, const std::string& yname,
                          const std::vector<std::pair<double, double>>& series) {
  std::string out = xname + "," + yname + "\n";
  for (const auto& [x, y] : series) {
    out += format_double(x);
    out += ',';
    out += format_double(y);
    out += '\n';
  }
  return out;
}

}  // namespace steinerlab
