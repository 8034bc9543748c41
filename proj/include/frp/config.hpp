#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace frp {

/// Plain `key=value` text; `#` starts a comment, blank lines are ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig load(const std::filesystem::path& path);
  static KeyValueConfig parse(const std::string& text);

  std::optional<std::string> get(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace frp
