#include "json_support.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

namespace npconf::detail {

std::string escape_pointer(const std::string& token) {
  std::string out;
  for (char c : token) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

namespace {

// Minimal scanner over text that nlohmann already accepted.
class Indexer {
 public:
  Indexer(std::string_view text, std::map<std::string, std::size_t>& out) : s_(text), out_(out) {}

  void run() {
    skip_ws();
    value("");
  }

 private:
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string string_token() {
    std::string out;
    ++i_;  // opening quote
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') {
        ++i_;
        if (i_ >= s_.size()) break;
        switch (s_[i_]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'u': out += '?'; i_ += 4; break;
          default: out += s_[i_];
        }
        ++i_;
        continue;
      }
      out += s_[i_++];
    }
    ++i_;  // closing quote
    return out;
  }

  void value(const std::string& pointer) {
    out_.emplace(pointer, i_);
    if (i_ >= s_.size()) return;
    const char c = s_[i_];
    if (c == '{') {
      ++i_;
      skip_ws();
      while (i_ < s_.size() && s_[i_] != '}') {
        std::string key = string_token();
        skip_ws();
        ++i_;  // ':'
        skip_ws();
        value(pointer + "/" + escape_pointer(key));
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        skip_ws();
      }
      ++i_;
    } else if (c == '[') {
      ++i_;
      skip_ws();
      std::size_t index = 0;
      while (i_ < s_.size() && s_[i_] != ']') {
        value(pointer + "/" + std::to_string(index++));
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        skip_ws();
      }
      ++i_;
    } else if (c == '"') {
      string_token();
    } else {
      while (i_ < s_.size() && !std::strchr(",]} \t\r\n", s_[i_])) ++i_;
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::map<std::string, std::size_t>& out_;
};

}  // namespace

SourceMap::SourceMap(std::string_view text) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == '\n') line_starts_.push_back(i + 1);
  Indexer(text, offsets_).run();
}

std::pair<std::size_t, std::size_t> SourceMap::line_column(std::size_t offset) const {
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  const std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
  return {line, offset - line_starts_[line - 1] + 1};
}

std::pair<std::size_t, std::size_t> SourceMap::position(std::string pointer) const {
  while (true) {
    if (auto it = offsets_.find(pointer); it != offsets_.end()) return line_column(it->second);
    if (pointer.empty()) return {1, 1};
    pointer.erase(pointer.rfind('/'));
  }
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    offset = std::min(offset, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix.
    if (auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError("malformed JSON: " + what, line, col);
  }
}

namespace {

void emit(const Json& j, int depth, int expand_depth, std::string& out) {
  const bool container = j.is_object() || j.is_array();
  const bool flat = j.is_array() && std::none_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); });
  if (!container || flat || depth >= expand_depth || j.empty()) {
    out += j.dump();
    return;
  }
  const std::string pad(2 * (depth + 1), ' ');
  out += j.is_object() ? "{\n" : "[\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (j.is_object()) out += Json(it.key()).dump() + ": ";
    emit(it.value(), depth + 1, expand_depth, out);
  }
  out += "\n" + std::string(2 * depth, ' ') + (j.is_object() ? "}" : "]");
}

}  // namespace

std::string pretty(const Json& j, int expand_depth) {
  std::string out;
  emit(j, 0, expand_depth, out);
  out += "\n";
  return out;
}

const Json& Reader::member(const Json& obj, const std::string& pointer, const char* key) const {
  auto it = obj.find(key);
  if (it == obj.end()) fail(pointer, std::string("missing key '") + key + "'");
  return *it;
}

const Json* Reader::optional_member(const Json& obj, const char* key) const {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string Reader::string(const Json& j, const std::string& pointer) const {
  if (!j.is_string()) fail(pointer, "expected a string");
  std::string s = j.get<std::string>();
  if (s.empty()) fail(pointer, "expected a non-empty string");
  return s;
}

const Json& Reader::object(const Json& j, const std::string& pointer) const {
  if (!j.is_object()) fail(pointer, "expected an object");
  return j;
}

const Json& Reader::array(const Json& j, const std::string& pointer) const {
  if (!j.is_array()) fail(pointer, "expected an array");
  return j;
}

std::size_t Reader::positive(const Json& j, const std::string& pointer) const {
  if (!j.is_number_integer()) fail(pointer, "expected an integer");
  if (j.get<long long>() < 1) fail(pointer, "expected a positive integer");
  return j.get<std::size_t>();
}

void Reader::check_schema(const Json& root, const std::string& expected) const {
  object(root, "");
  const auto& schema = member(root, "", "schema");
  if (string(schema, "/schema") != expected)
    fail("/schema", "unsupported schema '" + schema.get<std::string>() + "', expected '" + expected + "'");
}

}  // namespace npconf::detail
