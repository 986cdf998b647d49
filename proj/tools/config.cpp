#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <fmt/format.h>

#include "zrp/errors.hpp"

namespace zrp::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_uint(const std::string& s) {
  // Accept plain integers and integral scientific notation such as 1e7.
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec == std::errc() && ptr == end && !s.empty()) return v;
  const auto d = parse_double(s);
  if (d && *d >= 0.0 && *d < 1.8e19 && std::floor(*d) == *d) return static_cast<std::uint64_t>(*d);
  return std::nullopt;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open config file", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path.string());
}

Config Config::from_string(const std::string& text, const std::string& name) {
  Config c;
  c.name_ = name;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, c.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("{}:{}: {}", name, e.line(), e.message()));
  }
  // Second pass for line numbers of each key.
  std::istringstream lines(text);
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos) c.lines_[section + "." + trim(t.substr(0, eq))] = number;
  }
  return c;
}

std::string Config::where(const std::string& section, const std::string& key) const {
  const auto it = lines_.find(section + "." + key);
  if (it == lines_.end()) return fmt::format("{}: field {}.{}", name_, section, key);
  return fmt::format("{}:{}: field {}.{}", name_, it->second, section, key);
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& message) const {
  throw ConfigError(fmt::format("{}: {}", where(section, key), message));
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = tree_.get_child_optional(section);
  return s && s->get_child_optional(boost::property_tree::ptree::path_type(key, '\0'));
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  if (!has(section, key)) fail(section, key, "missing required value");
  return trim(tree_.get_child(section).get<std::string>(
      boost::property_tree::ptree::path_type(key, '\0')));
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const std::string raw = get_string(section, key);
  const auto v = parse_double(raw);
  if (!v || !std::isfinite(*v)) fail(section, key, fmt::format("'{}' is not a number", raw));
  return *v;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::uint64_t Config::get_uint(const std::string& section, const std::string& key) const {
  const std::string raw = get_string(section, key);
  const auto v = parse_uint(raw);
  if (!v) fail(section, key, fmt::format("'{}' is not a nonnegative integer", raw));
  return *v;
}

std::uint64_t Config::get_uint(const std::string& section, const std::string& key,
                               std::uint64_t fallback) const {
  return has(section, key) ? get_uint(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get_string(section, key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  fail(section, key, fmt::format("'{}' is not a boolean", v));
}

std::vector<double> Config::get_grid(const std::string& section, const std::string& key) const {
  const std::string raw = get_string(section, key);
  std::vector<double> out;
  if (raw.find(':') != std::string::npos) {
    const auto parts = split(raw, ':');
    if (parts.size() != 3) fail(section, key, "range must be start:stop:step");
    const auto a = parse_double(parts[0]);
    const auto b = parse_double(parts[1]);
    const auto h = parse_double(parts[2]);
    if (!a || !b || !h) fail(section, key, fmt::format("'{}' is not a numeric range", raw));
    if (!(*h > 0.0) || *b < *a) fail(section, key, "range needs step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((*b - *a) / *h + 1e-9));
    if (n > 10'000'000) fail(section, key, "range has too many points");
    for (std::size_t i = 0; i <= n; ++i) out.push_back(*a + static_cast<double>(i) * *h);
  } else {
    for (const auto& item : split(raw, ',')) {
      const auto v = parse_double(item);
      if (!v || !std::isfinite(*v)) fail(section, key, fmt::format("'{}' is not a number", item));
      out.push_back(*v);
    }
  }
  if (out.empty()) fail(section, key, "grid must not be empty");
  return out;
}

std::vector<std::uint64_t> Config::get_uint_list(const std::string& section,
                                                 const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(get_string(section, key), ',')) {
    const auto v = parse_uint(item);
    if (!v) fail(section, key, fmt::format("'{}' is not a nonnegative integer", item));
    out.push_back(*v);
  }
  if (out.empty()) fail(section, key, "list must not be empty");
  return out;
}

RateModel Config::model() const {
  const double c0 = get_double("model", "c0");
  const double c1 = get_double("model", "c1");
  const double a = get_double("model", "a", 0.0);
  CutoffMode mode = CutoffMode::kLatticeDep;
  if (has("model", "mode")) {
    try {
      mode = cutoff_mode_from_string(get_string("model", "mode"));
    } catch (const DomainError& e) {
      fail("model", "mode", e.what());
    }
  }
  std::optional<std::size_t> R;
  if (has("model", "R")) R = get_uint("model", "R");
  if (!(c0 > c1)) fail("model", "c1", "rates must satisfy c0 > c1 > 0");
  if (!(c1 > 0.0)) fail("model", "c1", "rates must satisfy c0 > c1 > 0");
  try {
    return RateModel(c0, c1, a, mode, R);
  } catch (const DomainError& e) {
    fail("model", "a", e.what());
  }
}

std::uint64_t Config::seed(std::optional<std::uint64_t> override_seed) const {
  if (override_seed) return *override_seed;
  if (!has("run", "seed")) {
    throw ConfigError(fmt::format("{}: field run.seed: missing (pass --seed or set it)", name_));
  }
  return get_uint("run", "seed");
}

std::string Config::normalized() const {
  std::vector<std::string> lines;
  for (const auto& [section, child] : tree_) {
    if (child.empty()) {
      lines.push_back(fmt::format("{}={}", section, trim(child.data())));
      continue;
    }
    for (const auto& [key, value] : child) {
      lines.push_back(fmt::format("{}.{}={}", section, key, trim(value.data())));
    }
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(normalized()); }

}  // namespace zrp::cli
