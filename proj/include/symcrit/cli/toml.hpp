#pragma once

// Minimal TOML reader for spec files: tables, dotted headers and keys, basic
// and literal strings, integers, floats, booleans, arrays and inline tables.
// Arrays of tables, dates and multi-line strings are not supported.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "symcrit/errors.hpp"

namespace symcrit::toml {

struct Position {
  int line = 0;
  int column = 0;
};

/// Parse or validation error at a position in the source.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, Position pos)
      : InputError(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos) {}
  Position position() const { return pos_; }

 private:
  Position pos_;
};

struct Value;

/// Insertion-ordered table.
struct Table {
  std::vector<std::string> keys;
  std::vector<Value> values;
  std::vector<Position> key_positions;
  Position position;
  bool inline_table = false;
  bool explicit_header = false;

  const Value* find(std::string_view key) const;
  Value* find(std::string_view key);
  std::size_t size() const { return keys.size(); }
};

using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, std::int64_t, double, bool, Array, Table> data;
  Position position;

  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_number() const {
    return std::holds_alternative<std::int64_t>(data) || std::holds_alternative<double>(data);
  }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
  bool is_table() const { return std::holds_alternative<Table>(data); }

  double as_number() const;
  const std::string& as_string() const { return std::get<std::string>(data); }
  const Array& as_array() const { return std::get<Array>(data); }
  const Table& as_table() const { return std::get<Table>(data); }
  const char* type_name() const;
};

Table parse(std::string_view text);

/// Normalized rendering: root scalars, then one [header] per table in key
/// order; numbers in shortest round-trip form.
std::string dump(const Table& root);

}  // namespace symcrit::toml
