#include "kv_file.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <istream>

#include "bcmec/errors.hpp"

namespace bcmec::detail {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string::size_type start = 0;
  while (start <= value.size()) {
    auto pos = value.find(',', start);
    auto item = trim(value.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (!item.empty()) items.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return items;
}

}  // namespace

KeyValues read_key_values(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  KeyValues values;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      values[section] = trim(body.data());
      continue;
    }
    for (const auto& [key, leaf] : body) values[section + "." + key] = trim(leaf.data());
  }
  return values;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    throw ConfigError("config: " + key + " expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config: " + key + " expects true/false, got '" + value + "'");
}

std::vector<double> to_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::uint64_t> to_uint_list(const std::string& key, const std::string& value) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(value)) out.push_back(to_uint(key, item));
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string format_double_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace bcmec::detail
