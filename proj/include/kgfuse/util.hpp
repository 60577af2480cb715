#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgfuse {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_upper(std::string_view s);
bool is_ident_start(char c);
bool is_ident_char(char c);

// Collapses runs of whitespace to single spaces and trims the ends.
std::string normalize_space(std::string_view s);

// 64-bit FNV-1a. Used for corpus/config fingerprints; not cryptographic.
class Fnv1a {
 public:
  void update(std::string_view data);
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string fnv1a_hex(std::string_view data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

// "%XX" escaping of '%' and every byte in `special`.
std::string percent_escape(std::string_view s, std::string_view special);
// Throws kConfigError on a malformed escape.
std::string percent_unescape(std::string_view s);

}  // namespace kgfuse
