#include "scadamp/experiments/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scadamp/errors.hpp"

namespace scadamp {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  const char* c = text.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0' || errno == ERANGE)
    throw UsageError("config: key '" + key + "' has non-numeric value '" +
                     text + "'");
  return v;
}

}  // namespace

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected 'key = value', got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw UsageError("config line " + std::to_string(lineno) +
                       ": empty key or value");
    if (cfg.kv_.count(key))
      throw UsageError("config: duplicate key '" + key + "'");
    cfg.kv_[key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

double Config::get_double(const std::string& key) {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw UsageError("config: missing required key '" + key + "'");
  return parse_double(it->second, key);
}

double Config::get_double(const std::string& key, double fallback) {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return parse_double(it->second, key);
}

long Config::get_long(const std::string& key, long fallback) {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  double v = parse_double(it->second, key);
  long l = static_cast<long>(v);
  if (static_cast<double>(l) != v)
    throw UsageError("config: key '" + key + "' must be an integer");
  return l;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& text = it->second;
  const char* c = text.c_str();
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(c, &end, 10);
  if (end == c || *end != '\0' || errno == ERANGE || text[0] == '-')
    throw UsageError("config: key '" + key +
                     "' must be an unsigned integer, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::vector<double> Config::get_grid(const std::string& key) {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw UsageError("config: missing required key '" + key + "'");
  return parse_grid(it->second, key);
}

std::vector<double> parse_grid(const std::string& text,
                               const std::string& key) {
  std::vector<double> out;
  if (text.rfind("linspace:", 0) == 0) {
    std::string body = text.substr(9);
    std::vector<std::string> parts;
    std::istringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3)
      throw UsageError("config: key '" + key +
                       "' linspace needs lo:hi:count");
    double lo = parse_double(parts[0], key);
    double hi = parse_double(parts[1], key);
    double cnt = parse_double(parts[2], key);
    long n = static_cast<long>(cnt);
    if (static_cast<double>(n) != cnt || n < 1)
      throw UsageError("config: key '" + key + "' linspace count invalid");
    if (n == 1) {
      out.push_back(lo);
    } else {
      for (long i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(n - 1));
    }
    return out;
  }
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = item;
    out.push_back(parse_double(t, key));
  }
  if (out.empty())
    throw UsageError("config: key '" + key + "' is an empty grid");
  return out;
}

void Config::check_keys(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : kv_) {
    (void)value;
    if (!allowed.count(key))
      throw UsageError("config: unknown key '" + key + "'");
  }
}

std::vector<std::string> Config::echo_lines() const {
  std::vector<std::string> lines;
  for (const auto& [key, value] : kv_) {
    if (key == "out") continue;
    lines.push_back("# " + key + " = " + value);
  }
  return lines;
}

}  // namespace scadamp
