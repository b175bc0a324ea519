#include "qmetric/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qmetric/errors.hpp"

namespace qmetric {

namespace {

[[noreturn]] void fail(const std::string& what, int line,
                       const std::string& field = {}) {
  throw ConfigError("line " + std::to_string(line) + ": " + what, line, field);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

// Cuts a trailing comment, ignoring '#' inside quoted strings.
std::string_view strip_comment(std::string_view s, int line) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
        continue;
      }
      if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  if (in_string) fail("unterminated string", line);
  return s;
}

std::string parse_string(std::string_view raw, int line) {
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\\') {
      ++i;
      if (i + 1 >= raw.size()) fail("dangling escape in string", line);
      switch (raw[i]) {
        case '"': c = '"'; break;
        case '\\': c = '\\'; break;
        case 'n': c = '\n'; break;
        case 't': c = '\t'; break;
        default: fail("unsupported escape in string", line);
      }
    } else if (c == '"') {
      fail("unexpected '\"' inside string", line);
    }
    out += c;
  }
  return out;
}

TomlValue parse_scalar(std::string_view raw, int line) {
  TomlValue v;
  v.line = line;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    v.type = TomlValue::Type::string;
    v.str = parse_string(raw, line);
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.type = TomlValue::Type::boolean;
    v.boolean = raw == "true";
    return v;
  }
  v.type = TomlValue::Type::number;
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  if (!raw.empty() && raw.front() == '+') ++begin;  // from_chars rejects '+'
  auto [ptr, ec] = std::from_chars(begin, end, v.number);
  if (ec != std::errc() || ptr != end)
    fail("cannot parse value '" + std::string(raw) + "'", line);
  return v;
}

TomlValue parse_value(std::string_view raw, int line) {
  raw = trim(raw);
  if (raw.empty()) fail("missing value", line);
  if (raw.front() != '[') return parse_scalar(raw, line);

  if (raw.back() != ']') fail("unterminated array", line);
  TomlValue v;
  v.line = line;
  v.type = TomlValue::Type::array;
  std::string_view body = trim(raw.substr(1, raw.size() - 2));
  if (body.empty()) return v;

  std::size_t start = 0;
  bool in_string = false;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    const bool at_end = i == body.size();
    if (!at_end && in_string) {
      if (body[i] == '\\') ++i;
      else if (body[i] == '"') in_string = false;
      continue;
    }
    if (!at_end && body[i] == '"') {
      in_string = true;
      continue;
    }
    if (!at_end && body[i] == '[') fail("nested arrays are not supported", line);
    if (at_end || body[i] == ',') {
      const std::string_view item = trim(body.substr(start, i - start));
      if (item.empty()) fail("empty array element", line);
      v.items.push_back(parse_scalar(item, line));
      start = i + 1;
    }
  }
  return v;
}

}  // namespace

const std::string& TomlValue::as_string(const std::string& field) const {
  if (type != Type::string)
    throw ConfigError("'" + field + "' must be a string (line " +
                          std::to_string(line) + ")",
                      line, field);
  return str;
}

double TomlValue::as_number(const std::string& field) const {
  if (type != Type::number)
    throw ConfigError("'" + field + "' must be a number (line " +
                          std::to_string(line) + ")",
                      line, field);
  return number;
}

int TomlValue::as_int(const std::string& field) const {
  const double v = as_number(field);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError("'" + field + "' must be an integer (line " +
                          std::to_string(line) + ")",
                      line, field);
  return static_cast<int>(v);
}

bool TomlValue::as_bool(const std::string& field) const {
  if (type != Type::boolean)
    throw ConfigError("'" + field + "' must be true or false (line " +
                          std::to_string(line) + ")",
                      line, field);
  return boolean;
}

const std::vector<TomlValue>& TomlValue::as_array(
    const std::string& field) const {
  if (type != Type::array)
    throw ConfigError("'" + field + "' must be an array (line " +
                          std::to_string(line) + ")",
                      line, field);
  return items;
}

const TomlTable::Section* TomlTable::section(const std::string& name) const {
  const auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

const TomlValue* TomlTable::find(const std::string& section_name,
                                 const std::string& key) const {
  const Section* s = section(section_name);
  if (s == nullptr) return nullptr;
  const auto it = s->find(key);
  return it == s->end() ? nullptr : &it->second;
}

TomlTable parse_toml(std::string_view text) {
  TomlTable table;
  std::string current;  // current section name, "" = top level
  table.sections[current];
  table.section_lines[current] = 0;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    line = trim(strip_comment(line, line_no));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header", line_no);
      const std::string name{trim(line.substr(1, line.size() - 2))};
      if (!valid_key(name)) fail("malformed section name", line_no);
      if (table.sections.count(name))
        fail("duplicate section [" + name + "]", line_no);
      table.sections[name];
      table.section_lines[name] = line_no;
      current = name;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      fail("expected 'key = value'", line_no);
    const std::string key{trim(line.substr(0, eq))};
    if (!valid_key(key)) fail("malformed key '" + key + "'", line_no);
    const std::string field = current.empty() ? key : current + "." + key;
    if (table.sections[current].count(key))
      fail("duplicate key '" + field + "'", line_no, field);
    TomlValue value = parse_value(line.substr(eq + 1), line_no);
    table.sections[current].emplace(key, std::move(value));
  }
  return table;
}

TomlTable load_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str());
}

}  // namespace qmetric
