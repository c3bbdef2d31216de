#include "pairspec/keyvalue.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace pairspec {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

double parse_double_strict(const std::string& token, const std::string& context) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::runtime_error(fmt::format("{}: not a number: '{}'", context, token));
  }
  return value;
}

std::int64_t parse_int_strict(const std::string& token, const std::string& context) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::runtime_error(fmt::format("{}: not an integer: '{}'", context, token));
  }
  return value;
}

KeyValueFile KeyValueFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  }
  return parse(in, path.string());
}

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(
          fmt::format("{}:{}: expected 'key = value', got '{}'", origin, lineno, line));
    }
    Entry e;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty()) {
      throw std::runtime_error(fmt::format("{}:{}: empty key", origin, lineno));
    }
    for (const auto& prev : kv.entries_) {
      if (prev.key == e.key) {
        throw std::runtime_error(fmt::format("{}:{}: duplicate key '{}' (first set on line {})",
                                             origin, lineno, e.key, prev.line));
      }
    }
    kv.entries_.push_back(std::move(e));
  }
  return kv;
}

const KeyValueFile::Entry* KeyValueFile::find(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const KeyValueFile::Entry& KeyValueFile::require(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) {
    throw std::runtime_error(fmt::format("{}: missing required key '{}'", origin_, key));
  }
  e->consumed = true;
  return *e;
}

bool KeyValueFile::has(const std::string& key) const { return find(key) != nullptr; }

std::string KeyValueFile::get_string(const std::string& key) const { return require(key).value; }

double KeyValueFile::get_double(const std::string& key) const {
  const Entry& e = require(key);
  return parse_double_strict(e.value, fmt::format("{}:{}: key '{}'", origin_, e.line, key));
}

std::int64_t KeyValueFile::get_int(const std::string& key) const {
  const Entry& e = require(key);
  return parse_int_strict(e.value, fmt::format("{}:{}: key '{}'", origin_, e.line, key));
}

bool KeyValueFile::get_bool(const std::string& key) const {
  const Entry& e = require(key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw std::runtime_error(
      fmt::format("{}:{}: key '{}': expected a boolean, got '{}'", origin_, e.line, key, e.value));
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueFile::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

void KeyValueFile::reject_unknown() const {
  std::string complaint;
  for (const auto& e : entries_) {
    if (!e.consumed) {
      complaint += fmt::format("{}  line {}: unknown key '{}'\n", complaint.empty() ? "\n" : "",
                               e.line, e.key);
    }
  }
  if (!complaint.empty()) {
    throw std::runtime_error(fmt::format("{}: unrecognized keys:{}", origin_, complaint));
  }
}

}  // namespace pairspec
