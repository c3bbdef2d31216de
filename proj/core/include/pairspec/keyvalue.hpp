#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace pairspec {

// Line-oriented "key = value" file.  '#' starts a comment, blank lines are
// ignored, keys are unique.  Every diagnostic carries the 1-based line
// number so config mistakes point at the offending line.
class KeyValueFile {
 public:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };

  static KeyValueFile parse_file(const std::filesystem::path& path);
  static KeyValueFile parse(std::istream& in, const std::string& origin);

  bool has(const std::string& key) const;
  // Accessors mark the key as consumed; missing key -> error naming the file.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Throws if any key was never consumed, listing each with its line number.
  void reject_unknown() const;

  const std::string& origin() const { return origin_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  const Entry* find(const std::string& key) const;
  const Entry& require(const std::string& key) const;

  std::string origin_;
  std::vector<Entry> entries_;
};

// Shared numeric parsing helpers (strict: the whole token must parse).
double parse_double_strict(const std::string& token, const std::string& context);
std::int64_t parse_int_strict(const std::string& token, const std::string& context);

}  // namespace pairspec
