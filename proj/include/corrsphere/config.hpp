// config.hpp
// Minimal structured-text config format used by scenario files:
// `key = value` scalars and nested `name { ... }` blocks, one item per
// line, `#` comments. Keys may repeat (ensemble members, responses).
// Reals serialize with 17 significant digits so parse(serialize(x))
// reproduces every double bit-exactly.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "corrsphere/core.hpp"

namespace corrsphere {

class ConfigBlock {
 public:
  struct Entry {
    std::string key;
    int line = 0;                          // 1-based source line, 0 if built
    std::string scalar;                    // set when block is null
    std::shared_ptr<ConfigBlock> block;    // set for nested blocks
  };

  const std::vector<Entry>& entries() const { return entries_; }

  bool has(const std::string& key) const;

  // Scalar accessors; get_* throw ConfigError naming the key (and line
  // where available) when the key is missing or repeated.
  const std::string* find_scalar(const std::string& key) const;
  std::string get_scalar(const std::string& key) const;
  double get_real(const std::string& key) const;
  double get_real_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::string get_scalar_or(const std::string& key,
                            const std::string& fallback) const;

  // All scalar values for a repeated key, in declaration order.
  std::vector<std::string> scalars(const std::string& key) const;

  const ConfigBlock* find_block(const std::string& key) const;
  const ConfigBlock& get_block(const std::string& key) const;
  std::vector<const ConfigBlock*> blocks(const std::string& key) const;

  // Builders used by the parser and by serialization round-trips.
  void add_scalar(const std::string& key, const std::string& value,
                  int line = 0);
  void add_real(const std::string& key, double value);
  void add_int(const std::string& key, std::int64_t value);
  ConfigBlock& add_block(const std::string& key, int line = 0);

  std::string serialize(int indent = 0) const;

 private:
  std::vector<Entry> entries_;
};

// Parses a whole config document; errors carry 1-based line numbers.
ConfigBlock parse_config(const std::string& text);

double parse_config_real(const std::string& text, const std::string& context);
std::int64_t parse_config_int(const std::string& text,
                              const std::string& context);

}  // namespace corrsphere
