#include "corrsphere/config.hpp"

#include <cmath>
#include <sstream>

namespace corrsphere {
namespace {

std::string trimmed(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::string describe(const std::string& key, int line) {
  if (line <= 0) return "key '" + key + "'";
  return "key '" + key + "' (line " + std::to_string(line) + ")";
}

}  // namespace

bool ConfigBlock::has(const std::string& key) const {
  for (const Entry& e : entries_) {
    if (e.key == key) return true;
  }
  return false;
}

const std::string* ConfigBlock::find_scalar(const std::string& key) const {
  const std::string* found = nullptr;
  for (const Entry& e : entries_) {
    if (e.key != key || e.block) continue;
    if (found) {
      throw ConfigError(describe(key, e.line) + " appears more than once");
    }
    found = &e.scalar;
  }
  return found;
}

std::string ConfigBlock::get_scalar(const std::string& key) const {
  const std::string* value = find_scalar(key);
  if (!value) throw ConfigError("missing required key '" + key + "'");
  return *value;
}

std::string ConfigBlock::get_scalar_or(const std::string& key,
                                       const std::string& fallback) const {
  const std::string* value = find_scalar(key);
  return value ? *value : fallback;
}

double ConfigBlock::get_real(const std::string& key) const {
  return parse_config_real(get_scalar(key), "key '" + key + "'");
}

double ConfigBlock::get_real_or(const std::string& key,
                                double fallback) const {
  const std::string* value = find_scalar(key);
  if (!value) return fallback;
  return parse_config_real(*value, "key '" + key + "'");
}

std::int64_t ConfigBlock::get_int(const std::string& key) const {
  return parse_config_int(get_scalar(key), "key '" + key + "'");
}

std::int64_t ConfigBlock::get_int_or(const std::string& key,
                                     std::int64_t fallback) const {
  const std::string* value = find_scalar(key);
  if (!value) return fallback;
  return parse_config_int(*value, "key '" + key + "'");
}

std::vector<std::string> ConfigBlock::scalars(const std::string& key) const {
  std::vector<std::string> out;
  for (const Entry& e : entries_) {
    if (e.key == key && !e.block) out.push_back(e.scalar);
  }
  return out;
}

const ConfigBlock* ConfigBlock::find_block(const std::string& key) const {
  const ConfigBlock* found = nullptr;
  for (const Entry& e : entries_) {
    if (e.key != key || !e.block) continue;
    if (found) {
      throw ConfigError(describe(key, e.line) + " appears more than once");
    }
    found = e.block.get();
  }
  return found;
}

const ConfigBlock& ConfigBlock::get_block(const std::string& key) const {
  const ConfigBlock* block = find_block(key);
  if (!block) throw ConfigError("missing required block '" + key + "'");
  return *block;
}

std::vector<const ConfigBlock*> ConfigBlock::blocks(
    const std::string& key) const {
  std::vector<const ConfigBlock*> out;
  for (const Entry& e : entries_) {
    if (e.key == key && e.block) out.push_back(e.block.get());
  }
  return out;
}

void ConfigBlock::add_scalar(const std::string& key, const std::string& value,
                             int line) {
  entries_.push_back({key, line, value, nullptr});
}

void ConfigBlock::add_real(const std::string& key, double value) {
  add_scalar(key, format_double(value));
}

void ConfigBlock::add_int(const std::string& key, std::int64_t value) {
  add_scalar(key, std::to_string(value));
}

ConfigBlock& ConfigBlock::add_block(const std::string& key, int line) {
  entries_.push_back({key, line, "", std::make_shared<ConfigBlock>()});
  return *entries_.back().block;
}

std::string ConfigBlock::serialize(int indent) const {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::ostringstream out;
  for (const Entry& e : entries_) {
    if (e.block) {
      out << pad << e.key << " {\n"
          << e.block->serialize(indent + 1) << pad << "}\n";
    } else {
      out << pad << e.key << " = " << e.scalar << "\n";
    }
  }
  return out.str();
}

ConfigBlock parse_config(const std::string& text) {
  ConfigBlock root;
  std::vector<ConfigBlock*> stack = {&root};
  std::vector<int> open_lines = {0};
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trimmed(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line == "}") {
      if (stack.size() == 1) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unmatched '}'");
      }
      stack.pop_back();
      open_lines.pop_back();
      continue;
    }
    if (line.back() == '{') {
      const std::string key = trimmed(line.substr(0, line.size() - 1));
      if (key.empty()) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": block needs a name before '{'");
      }
      ConfigBlock& child = stack.back()->add_block(key, line_no);
      stack.push_back(&child);
      open_lines.push_back(line_no);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', block '{' or '}', got '" +
                        line + "'");
    }
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": empty key before '='");
    }
    stack.back()->add_scalar(key, value, line_no);
  }
  if (stack.size() != 1) {
    throw ConfigError("block opened at line " +
                      std::to_string(open_lines.back()) + " is never closed");
  }
  return root;
}

double parse_config_real(const std::string& text, const std::string& context) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw ConfigError(context + ": cannot parse real '" + text + "'");
  }
  if (consumed != text.size()) {
    throw ConfigError(context + ": trailing characters in real '" + text +
                      "'");
  }
  if (!std::isfinite(value)) {
    throw ConfigError(context + ": real must be finite, got '" + text + "'");
  }
  return value;
}

std::int64_t parse_config_int(const std::string& text,
                              const std::string& context) {
  std::size_t consumed = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &consumed);
  } catch (const std::exception&) {
    throw ConfigError(context + ": cannot parse integer '" + text + "'");
  }
  if (consumed != text.size()) {
    throw ConfigError(context + ": trailing characters in integer '" + text +
                      "'");
  }
  return value;
}

}  // namespace corrsphere
