#pragma once

// INI run configuration with per-section key whitelists.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

namespace ddclock::cli {

class Config {
 public:
  // Throws ConfigError on unreadable files or malformed INI.
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin);

  // Rejects sections and keys outside `schema` (section -> allowed keys).
  void restrict_to(const std::map<std::string, std::set<std::string>>& schema) const;

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string text(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
  double number(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  long long integer(const std::string& section, const std::string& key) const;
  long long integer(const std::string& section, const std::string& key, long long fallback) const;
  bool flag(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;
  std::vector<long long> integers(const std::string& section, const std::string& key) const;
  std::array<double, 3> triple(const std::string& section, const std::string& key) const;

  // Either `<key> = a, b, c` or `<key>_min`, `<key>_max`, `<key>_points`.
  std::vector<double> grid(const std::string& section, const std::string& key) const;

  // "section.key = value" lines in file order, for output headers.
  std::vector<std::string> echo() const;
  const std::string& origin() const { return origin_; }

 private:
  boost::property_tree::ptree tree_;
  std::string origin_;
};

// Parses "1.5", "pi", "-pi/2", "0.5pi", "3*pi/4". Throws ConfigError.
double parse_number(const std::string& s);

}  // namespace ddclock::cli
