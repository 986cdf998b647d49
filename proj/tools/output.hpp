#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace zrp::cli {

inline constexpr int kCsvSchemaVersion = 1;

/// Shortest round-trip text for a double; "inf", "-inf" and "nan" spelled out.
std::string format_number(double x);

/// CSV file whose first lines are '#' comments with schema, config hash and seed.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& kind, std::uint64_t config_hash,
            std::uint64_t seed, const std::vector<std::string>& columns);

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

/// One observable of an experiment in long form.
struct ExperimentRecord {
  std::string parameters;  // "key=value;key=value"
  std::string observable;
  double value = 0.0;
  std::optional<double> std_error;          // stochastic records only
  std::optional<double> censored_fraction;  // lifetime records only
  std::string provenance;                   // analytic | recursion | simulation
};

void write_records(const std::filesystem::path& path, const std::string& kind,
                   std::uint64_t config_hash, std::uint64_t seed,
                   const std::vector<ExperimentRecord>& records);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // scatter instead of polyline
};

/// Self-contained SVG line plot with linear axes; non-finite points are skipped.
void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::string& x_label, const std::string& y_label,
               const std::vector<Series>& series);

}  // namespace zrp::cli
