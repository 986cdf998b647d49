#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "zrp/rate_model.hpp"

namespace zrp::cli {

/// Invalid configuration; the message carries file, line and field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat INI-style experiment configuration: [section] blocks of key = value.
///
/// Lists are comma separated; numeric grids also accept start:stop:step with
/// both ends included.
class Config {
 public:
  static Config from_file(const std::filesystem::path& path);
  static Config from_string(const std::string& text, const std::string& name = "<string>");

  [[nodiscard]] bool has(const std::string& section, const std::string& key) const;
  [[nodiscard]] std::string get_string(const std::string& section, const std::string& key) const;
  [[nodiscard]] std::string get_string(const std::string& section, const std::string& key,
                                       const std::string& fallback) const;
  [[nodiscard]] double get_double(const std::string& section, const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& section, const std::string& key,
                                  double fallback) const;
  [[nodiscard]] std::uint64_t get_uint(const std::string& section, const std::string& key) const;
  [[nodiscard]] std::uint64_t get_uint(const std::string& section, const std::string& key,
                                       std::uint64_t fallback) const;
  [[nodiscard]] bool get_bool(const std::string& section, const std::string& key,
                              bool fallback) const;
  /// Nonempty numeric grid (list or start:stop:step).
  [[nodiscard]] std::vector<double> get_grid(const std::string& section,
                                             const std::string& key) const;
  [[nodiscard]] std::vector<std::uint64_t> get_uint_list(const std::string& section,
                                                         const std::string& key) const;

  /// Model from [model]: c0, c1, a, optional mode (lattice | particle) and R.
  [[nodiscard]] RateModel model() const;

  /// Seed from the override or [run] seed; ConfigError when neither is present.
  [[nodiscard]] std::uint64_t seed(std::optional<std::uint64_t> override_seed) const;

  /// FNV-1a 64 hash of the normalized (sorted, trimmed) key = value content.
  [[nodiscard]] std::uint64_t hash() const;
  [[nodiscard]] std::string normalized() const;

  /// "file:line: field section.key" prefix for diagnostics.
  [[nodiscard]] std::string where(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const;

 private:
  std::string name_;
  boost::property_tree::ptree tree_;
  std::map<std::string, int> lines_;  // "section.key" -> 1-based line
};

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace zrp::cli
