#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace steinerlab {

/// One measured pass/fail comparison.  `anchor` names the statement the
/// check exercises (e.g. "Prop 3.8") and is copied verbatim into reports;
/// metadata carries the tolerance formula and any scan parameters so the
/// numbers can be re-verified externally.
struct CheckRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string anchor;
  std::map<std::string, std::string> metadata;

  static CheckRecord leq(std::string name, double lhs, double rhs, double tolerance,
                         std::string anchor);
  static CheckRecord info(std::string name, double value, std::string anchor);
};

/// Deterministic %.17g rendering used in every report writer.
std::string format_double(double v);

/// Records sorted by name; CSV columns name,lhs,rhs,tolerance,passed.
void sort_records(std::vector<CheckRecord>& records);
std::string records_to_csv(std::vector<CheckRecord> records);
std::string records_to_json(std::vector<CheckRecord> records);

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Two-column CSV used for the per-scan plot data emissions.
std::string series_to_csv(const std::string& xname, const std::string& yname,
                          const std::vector<std::pair<double, double>>& series);

}  // namespace steinerlab
