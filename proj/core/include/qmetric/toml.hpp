#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qmetric {

// Small TOML subset: [section] headers, key = value pairs, strings, bools,
// numbers, single-line arrays, # comments. Every value remembers its source
// line so configuration errors can point at the file. Covers exactly what
// run configurations need; anything outside the subset is rejected loudly.

struct TomlValue {
  enum class Type { string, number, boolean, array };

  Type type = Type::number;
  std::string str;
  double number = 0.0;
  bool boolean = false;
  std::vector<TomlValue> items;
  int line = 0;

  // Typed accessors throw ConfigError naming the field on a type mismatch.
  const std::string& as_string(const std::string& field) const;
  double as_number(const std::string& field) const;
  int as_int(const std::string& field) const;
  bool as_bool(const std::string& field) const;
  const std::vector<TomlValue>& as_array(const std::string& field) const;
};

struct TomlTable {
  using Section = std::map<std::string, TomlValue>;

  std::map<std::string, Section> sections;  // "" holds top-level keys
  std::map<std::string, int> section_lines;

  const Section* section(const std::string& name) const;
  const TomlValue* find(const std::string& section_name,
                        const std::string& key) const;
};

TomlTable parse_toml(std::string_view text);
TomlTable load_toml_file(const std::string& path);

}  // namespace qmetric
