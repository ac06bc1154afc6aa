#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace scadamp {

// Key-value experiment configuration: one `key = value` per line, `#`
// comments, blank lines ignored.  Grids are comma lists ("0.1,0.2,0.5") or
// "linspace:lo:hi:count".  Unknown or malformed keys are usage errors so a
// typo cannot silently fall back to a default.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  // CLI flag overrides (applied after parsing).
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;

  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  long get_long(const std::string& key, long fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  std::vector<double> get_grid(const std::string& key);

  // Throws UsageError if any key is outside `allowed` (missing required keys
  // surface earlier through the getters).
  void check_keys(const std::set<std::string>& allowed) const;

  // Canonical "# key = value" echo lines, sorted by key, with `out`
  // excluded so moving the artifact does not change its bytes.
  std::vector<std::string> echo_lines() const;

 private:
  std::map<std::string, std::string> kv_;
};

std::vector<double> parse_grid(const std::string& text,
                               const std::string& key);

}  // namespace scadamp
