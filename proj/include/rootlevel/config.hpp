// Line-based key = value config reader shared by the CLI and phantom specs.
// '#' starts a comment; blank lines are skipped; keys may repeat.
#pragma once

#include <string>
#include <vector>

namespace rootlevel {

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

std::vector<ConfigEntry> read_config_file(const std::string& path);

// Strict numeric parsing; the message names the offending key.
long long config_int(const ConfigEntry& e);
double config_double(const ConfigEntry& e);
bool config_bool(const ConfigEntry& e);  // accepts 0/1/true/false/on/off

// Comma-separated lists.
std::vector<long long> config_int_list(const ConfigEntry& e);
std::vector<double> config_double_list(const ConfigEntry& e);

}  // namespace rootlevel
