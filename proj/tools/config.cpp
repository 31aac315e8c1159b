#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "ddclock/errors.hpp"

namespace ddclock::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double strict_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) throw ConfigError("empty number");
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + t + "'");
  }
  if (used != t.size()) throw ConfigError("not a number: '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace

double parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  const auto pos = s.find("pi");
  if (pos == std::string::npos) {
    const double v = strict_double(s);
    if (!std::isfinite(v)) throw ConfigError("non-finite number: '" + s + "'");
    return v;
  }
  std::string coef = trim(s.substr(0, pos));
  std::string rest = trim(s.substr(pos + 2));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (coef == "+" || coef.empty()) {
    c = 1.0;
  } else {
    c = strict_double(coef);
  }
  double div = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') throw ConfigError("cannot parse '" + s + "'");
    div = strict_double(rest.substr(1));
    if (div == 0.0) throw ConfigError("division by zero in '" + s + "'");
  }
  return c * std::numbers::pi / div;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, c.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [name, sec] : c.tree_) {
    if (sec.empty() && !sec.data().empty()) throw ConfigError(origin + ": key '" + name + "' outside a section");
  }
  return c;
}

void Config::restrict_to(const std::map<std::string, std::set<std::string>>& schema) const {
  for (const auto& [name, sec] : tree_) {
    const auto it = schema.find(name);
    if (it == schema.end()) throw ConfigError("unknown section [" + name + "]");
    for (const auto& [key, value] : sec) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in section [" + name + "]");
    }
  }
}

bool Config::has_section(const std::string& section) const { return tree_.find(section) != tree_.not_found(); }

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = tree_.find(section);
  if (s == tree_.not_found()) return false;
  return s->second.find(key) != s->second.not_found();
}

std::string Config::text(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ConfigError("missing key '" + key + "' in section [" + section + "]");
  return trim(tree_.get_child(section).get_child(key).data());
}

std::string Config::text(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

double Config::number(const std::string& section, const std::string& key) const {
  try {
    return parse_number(text(section, key));
  } catch (const ConfigError& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

double Config::number(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

long long Config::integer(const std::string& section, const std::string& key) const {
  const std::string t = text(section, key);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw ConfigError("[" + section + "] " + key + ": not an integer: '" + t + "'");
  return v;
}

long long Config::integer(const std::string& section, const std::string& key, long long fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

bool Config::flag(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string t = text(section, key);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ConfigError("[" + section + "] " + key + ": expected true or false, got '" + t + "'");
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key) const {
  const std::string t = text(section, key);
  std::vector<double> out;
  if (t.empty()) return out;
  for (const auto& item : split(t, ',')) {
    try {
      out.push_back(parse_number(item));
    } catch (const ConfigError& e) {
      throw ConfigError("[" + section + "] " + key + ": " + e.what());
    }
  }
  return out;
}

std::vector<long long> Config::integers(const std::string& section, const std::string& key) const {
  std::vector<long long> out;
  for (double v : numbers(section, key)) {
    if (v != std::floor(v) || std::abs(v) > 9e15) {
      throw ConfigError("[" + section + "] " + key + ": expected integers");
    }
    out.push_back(static_cast<long long>(v));
  }
  return out;
}

std::array<double, 3> Config::triple(const std::string& section, const std::string& key) const {
  const auto v = numbers(section, key);
  if (v.size() != 3) throw ConfigError("[" + section + "] " + key + ": expected three components");
  return {v[0], v[1], v[2]};
}

std::vector<double> Config::grid(const std::string& section, const std::string& key) const {
  const bool listed = has(section, key);
  const bool ranged = has(section, key + "_min") || has(section, key + "_max") || has(section, key + "_points");
  if (listed && ranged) throw ConfigError("[" + section + "] give either " + key + " or " + key + "_min/_max/_points");
  if (listed) return numbers(section, key);
  if (!ranged) throw ConfigError("missing grid '" + key + "' in section [" + section + "]");
  const double lo = number(section, key + "_min");
  const double hi = number(section, key + "_max");
  const long long n = integer(section, key + "_points");
  if (n < 1) throw ConfigError("[" + section + "] " + key + "_points must be >= 1");
  if (n > 100000000) throw ConfigError("[" + section + "] " + key + "_points is too large");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  for (long long i = 0; i < n; ++i) {
    out.push_back(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

std::vector<std::string> Config::echo() const {
  std::vector<std::string> out;
  for (const auto& [name, sec] : tree_)
    for (const auto& [key, value] : sec) out.push_back(name + "." + key + " = " + trim(value.data()));
  return out;
}

}  // namespace ddclock::cli
