#pragma once

// Line-oriented `key = value` records (run metadata and config files) and
// atomic artifact writes.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gelfand::io {

/// Ordered key=value record; insertion order is preserved on output.
class KeyValue {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

  bool contains(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void write(std::ostream& os) const;

  /// Parses `key = value` lines; `#` starts a comment; blank lines ignored.
  /// Throws DomainError on malformed lines.
  static KeyValue parse(std::istream& is);
  static KeyValue load(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
};

/// Writes via a temporary sibling file and renames it into place.
void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

}  // namespace gelfand::io
