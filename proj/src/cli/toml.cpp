#include "symcrit/cli/toml.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace symcrit::toml {

const Value* Table::find(std::string_view key) const {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == key) return &values[i];
  }
  return nullptr;
}

Value* Table::find(std::string_view key) {
  return const_cast<Value*>(static_cast<const Table*>(this)->find(key));
}

double Value::as_number() const {
  if (const auto* i = std::get_if<std::int64_t>(&data)) return static_cast<double>(*i);
  return std::get<double>(data);
}

const char* Value::type_name() const {
  switch (data.index()) {
    case 0: return "string";
    case 1: return "integer";
    case 2: return "float";
    case 3: return "boolean";
    case 4: return "array";
    default: return "table";
  }
}

namespace {

bool is_bare_key_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Table run() {
    Table root;
    root.position = {1, 1};
    Table* current = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        current = header(root);
      } else {
        key_value(*current);
      }
      end_of_line();
    }
    return root;
  }

 private:
  bool eof() const { return i_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < s_.size() ? s_[i_ + ahead] : '\0'; }
  Position here() const { return {line_, col_}; }

  char advance() {
    const char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, here()); }
  [[noreturn]] static void fail_at(const std::string& msg, Position p) { throw ParseError(msg, p); }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) advance();
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') advance();
    }
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r' && peek(1) == '\n') advance();
      if (peek() == '\n') {
        advance();
        continue;
      }
      break;
    }
  }
  // Whitespace, newlines and comments (inside arrays).
  void skip_all() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        advance();
        continue;
      }
      break;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r' && peek(1) == '\n') advance();
    if (peek() != '\n') fail("expected end of line, found '" + std::string(1, peek()) + "'");
    advance();
  }

  struct KeyPart {
    std::string name;
    Position pos;
  };

  std::vector<KeyPart> dotted_key() {
    std::vector<KeyPart> parts;
    while (true) {
      skip_ws();
      const Position p = here();
      std::string name;
      if (peek() == '"') {
        name = basic_string();
      } else if (peek() == '\'') {
        name = literal_string();
      } else {
        while (!eof() && is_bare_key_char(peek())) name += advance();
        if (name.empty()) fail(eof() || peek() == '\n' ? "expected a key" : "invalid character in key: '" + std::string(1, peek()) + "'");
      }
      parts.push_back({name, p});
      skip_ws();
      if (peek() != '.') break;
      advance();
    }
    return parts;
  }

  static Table* descend(Table& t, const KeyPart& part, bool allow_inline) {
    if (Value* v = t.find(part.name)) {
      auto* sub = std::get_if<Table>(&v->data);
      if (!sub || (sub->inline_table && !allow_inline)) fail_at("key '" + part.name + "' is already defined", part.pos);
      return sub;
    }
    Table fresh;
    fresh.position = part.pos;
    t.keys.push_back(part.name);
    t.key_positions.push_back(part.pos);
    t.values.push_back(Value{std::move(fresh), part.pos});
    return &std::get<Table>(t.values.back().data);
  }

  Table* header(Table& root) {
    const Position start = here();
    advance();
    if (peek() == '[') fail("arrays of tables are not supported");
    const auto parts = dotted_key();
    skip_ws();
    if (peek() != ']') fail("expected ']' to close the table header");
    advance();
    Table* t = &root;
    for (const auto& part : parts) t = descend(*t, part, false);
    if (t->explicit_header) fail_at("table '" + parts.back().name + "' is defined twice", start);
    t->explicit_header = true;
    return t;
  }

  void key_value(Table& table) {
    const auto parts = dotted_key();
    skip_ws();
    if (peek() != '=') fail("expected '=' after key");
    advance();
    skip_ws();
    Table* t = &table;
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) t = descend(*t, parts[k], false);
    const auto& last = parts.back();
    if (t->find(last.name)) fail_at("key '" + last.name + "' is already defined", last.pos);
    Value v = value();
    t->keys.push_back(last.name);
    t->key_positions.push_back(last.pos);
    t->values.push_back(std::move(v));
  }

  Value value() {
    const Position p = here();
    if (eof() || peek() == '\n' || peek() == '#') fail("expected a value");
    const char c = peek();
    if (c == '"') return {basic_string(), p};
    if (c == '\'') return {literal_string(), p};
    if (c == '[') return {array(), p};
    if (c == '{') return {inline_table(p), p};
    if (s_.substr(i_, 4) == "true" && !is_bare_key_char(peek(4))) {
      for (int k = 0; k < 4; ++k) advance();
      return {true, p};
    }
    if (s_.substr(i_, 5) == "false" && !is_bare_key_char(peek(5))) {
      for (int k = 0; k < 5; ++k) advance();
      return {false, p};
    }
    return number(p);
  }

  std::string basic_string() {
    if (s_.substr(i_, 3) == "\"\"\"") fail("multi-line strings are not supported");
    advance();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = advance();
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated string");
      const char e = advance();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'u': append_utf8(out, hex_code(4)); break;
        case 'U': append_utf8(out, hex_code(8)); break;
        default: fail(std::string("unsupported escape '\\") + e + "'");
      }
    }
    return out;
  }

  std::uint32_t hex_code(int digits) {
    std::uint32_t code = 0;
    for (int k = 0; k < digits; ++k) {
      if (eof() || !std::isxdigit(static_cast<unsigned char>(peek()))) fail("bad unicode escape");
      const char h = advance();
      code = code * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                        ? h - '0'
                                                        : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
    }
    if (code > 0x10FFFF || (code >= 0xD800 && code <= 0xDFFF)) fail("unicode escape is not a scalar value");
    return code;
  }

  static void append_utf8(std::string& out, std::uint32_t c) {
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else if (c < 0x800) {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
      out += static_cast<char>(0xE0 | (c >> 12));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (c >> 18));
      out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
  }

  std::string literal_string() {
    if (s_.substr(i_, 3) == "'''") fail("multi-line strings are not supported");
    advance();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = advance();
      if (c == '\'') break;
      out += c;
    }
    return out;
  }

  Array array() {
    advance();
    Array out;
    while (true) {
      skip_all();
      if (eof()) fail("unterminated array");
      if (peek() == ']') {
        advance();
        return out;
      }
      out.push_back(value());
      skip_all();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == ']') {
        advance();
        return out;
      }
      fail("expected ',' or ']' in array");
    }
  }

  Table inline_table(Position p) {
    advance();
    Table t;
    t.position = p;
    t.inline_table = true;
    skip_ws();
    if (peek() == '}') {
      advance();
      return t;
    }
    while (true) {
      key_value(t);
      skip_ws();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == '}') {
        advance();
        return t;
      }
      fail("expected ',' or '}' in inline table");
    }
  }

  Value number(Position p) {
    std::string tok;
    while (!eof()) {
      const char c = peek();
      if (is_bare_key_char(c) || c == '.' || c == '+') {
        tok += advance();
      } else {
        break;
      }
    }
    if (tok.empty()) fail_at("invalid value", p);
    std::string body = tok;
    const bool negative = !body.empty() && body[0] == '-';
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) body.erase(0, 1);
    if (body == "inf") return {negative ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity(), p};
    if (body == "nan") return {std::numeric_limits<double>::quiet_NaN(), p};
    for (std::size_t k = 0; k < body.size(); ++k) {
      if (body[k] != '_') continue;
      const bool ok = k > 0 && k + 1 < body.size() && std::isdigit(static_cast<unsigned char>(body[k - 1])) &&
                      std::isdigit(static_cast<unsigned char>(body[k + 1]));
      if (!ok) fail_at("invalid number '" + tok + "'", p);
    }
    body.erase(std::remove(body.begin(), body.end(), '_'), body.end());
    const std::string signed_body = (negative ? "-" : "") + body;
    const char* first = signed_body.data();
    const char* last = first + signed_body.size();
    const bool is_float = body.find_first_of(".eE") != std::string::npos;
    if (body.empty() || !std::isdigit(static_cast<unsigned char>(body[0]))) fail_at("invalid value '" + tok + "'", p);
    if (is_float) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || body.back() == '.' || body.find(".e") != std::string::npos ||
          body.find(".E") != std::string::npos) {
        fail_at("invalid number '" + tok + "'", p);
      }
      return {v, p};
    }
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail_at("invalid integer '" + tok + "'", p);
    if (body.size() > 1 && body[0] == '0') fail_at("leading zeros are not allowed in '" + tok + "'", p);
    return {v, p};
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string out(buf, ptr);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string render_key(const std::string& k) {
  const bool bare = !k.empty() && std::all_of(k.begin(), k.end(), is_bare_key_char);
  return bare ? k : quote(k);
}

std::vector<std::size_t> sorted_order(const Table& t) {
  std::vector<std::size_t> idx(t.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return t.keys[a] < t.keys[b]; });
  return idx;
}

std::string inline_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return quote(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Array>) {
          std::string out = "[";
          for (std::size_t k = 0; k < x.size(); ++k) out += (k ? ", " : "") + inline_value(x[k]);
          return out + "]";
        } else {
          std::string out = "{";
          bool first = true;
          for (auto k : sorted_order(x)) {
            out += (first ? "" : ", ") + render_key(x.keys[k]) + " = " + inline_value(x.values[k]);
            first = false;
          }
          return out + "}";
        }
      },
      v.data);
}

bool is_section(const Value& v) {
  const auto* t = std::get_if<Table>(&v.data);
  return t && !t->inline_table;
}

void dump_table(const Table& t, const std::string& path, std::string& out) {
  const auto order = sorted_order(t);
  bool has_scalars = false;
  for (auto k : order) has_scalars |= !is_section(t.values[k]);
  if (!path.empty() && (has_scalars || t.explicit_header)) {
    if (!out.empty()) out += "\n";
    out += "[" + path + "]\n";
  }
  for (auto k : order) {
    if (!is_section(t.values[k])) out += render_key(t.keys[k]) + " = " + inline_value(t.values[k]) + "\n";
  }
  for (auto k : order) {
    if (is_section(t.values[k])) {
      const std::string sub = path.empty() ? render_key(t.keys[k]) : path + "." + render_key(t.keys[k]);
      dump_table(std::get<Table>(t.values[k].data), sub, out);
    }
  }
}

}  // namespace

Table parse(std::string_view text) { return Parser(text).run(); }

std::string dump(const Table& root) {
  std::string out;
  dump_table(root, "", out);
  return out;
}

}  // namespace symcrit::toml
