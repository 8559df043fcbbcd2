#pragma once

// Internal helpers for the INI-style scenario files.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace bcmec::detail {

// "section.key" -> raw value
using KeyValues = std::map<std::string, std::string>;

KeyValues read_key_values(std::istream& in);

double to_double(const std::string& key, const std::string& value);
std::uint64_t to_uint(const std::string& key, const std::string& value);
bool to_bool(const std::string& key, const std::string& value);
std::vector<double> to_double_list(const std::string& key, const std::string& value);
std::vector<std::uint64_t> to_uint_list(const std::string& key, const std::string& value);

// Shortest round-trip decimal form.
std::string format_double(double value);
std::string format_double_list(const std::vector<double>& values);

}  // namespace bcmec::detail
