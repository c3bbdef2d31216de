#pragma once

#include <string>

namespace pairspec {

// Shortest decimal string that round-trips the exact double (std::to_chars).
// Locale-free, so CSV output is byte-stable across environments.
std::string format_double(double value);

// FNV-1a 64-bit over a byte string, rendered as 16 hex digits.  Used to stamp
// outputs with a digest of the effective configuration.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace pairspec
