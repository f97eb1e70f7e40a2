#include "rootlevel/config.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace rootlevel {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
    ++a;
  }
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
    --b;
  }
  return s.substr(a, b - a);
}

[[noreturn]] void bad_value(const ConfigEntry& e, const char* expected) {
  throw std::runtime_error("config key '" + e.key + "' (line " + std::to_string(e.line) +
                           "): expected " + expected + ", got '" + e.value + "'");
}

}  // namespace

std::vector<ConfigEntry> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::vector<ConfigEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    }
    ConfigEntry e;
    e.key = trim(stripped.substr(0, eq));
    e.value = trim(stripped.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

long long config_int(const ConfigEntry& e) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(e.value, &pos);
    if (pos != e.value.size()) {
      bad_value(e, "an integer");
    }
    return v;
  } catch (const std::runtime_error&) {
    throw;
  } catch (...) {
    bad_value(e, "an integer");
  }
}

double config_double(const ConfigEntry& e) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) {
      bad_value(e, "a number");
    }
    return v;
  } catch (const std::runtime_error&) {
    throw;
  } catch (...) {
    bad_value(e, "a number");
  }
}

bool config_bool(const ConfigEntry& e) {
  const std::string& v = e.value;
  if (v == "1" || v == "true" || v == "on" || v == "yes") {
    return true;
  }
  if (v == "0" || v == "false" || v == "off" || v == "no") {
    return false;
  }
  bad_value(e, "a boolean");
}

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(trim(s.substr(start)));
      break;
    }
    parts.push_back(trim(s.substr(start, comma - start)));
    start = comma + 1;
  }
  return parts;
}

}  // namespace

std::vector<long long> config_int_list(const ConfigEntry& e) {
  std::vector<long long> out;
  for (const std::string& p : split_commas(e.value)) {
    ConfigEntry sub{e.key, p, e.line};
    out.push_back(config_int(sub));
  }
  return out;
}

std::vector<double> config_double_list(const ConfigEntry& e) {
  std::vector<double> out;
  for (const std::string& p : split_commas(e.value)) {
    ConfigEntry sub{e.key, p, e.line};
    out.push_back(config_double(sub));
  }
  return out;
}

}  // namespace rootlevel
