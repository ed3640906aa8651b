#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "npconf/errors.hpp"

namespace npconf::detail {

using Json = nlohmann::ordered_json;

/// Where each value of a JSON text starts, keyed by JSON pointer.
class SourceMap {
 public:
  explicit SourceMap(std::string_view text);

  /// 1-based line and column of the value at `pointer`, or of the nearest
  /// ancestor that was indexed.
  std::pair<std::size_t, std::size_t> position(std::string pointer) const;
  std::pair<std::size_t, std::size_t> line_column(std::size_t offset) const;

 private:
  std::map<std::string, std::size_t> offsets_;
  std::vector<std::size_t> line_starts_;
};

/// Parses with nlohmann, turning syntax errors into ParseError with line and
/// column.
Json parse_json(std::string_view text);

/// Emits objects and arrays up to `expand_depth` levels deep one member per
/// line, deeper values on a single line.
std::string pretty(const Json& j, int expand_depth);

/// Reading helper that reports shape errors at the offending value.
class Reader {
 public:
  explicit Reader(std::string_view text) : map_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    auto [line, col] = map_.position(pointer);
    throw ParseError(message, line, col);
  }

  const Json& member(const Json& obj, const std::string& pointer, const char* key) const;
  const Json* optional_member(const Json& obj, const char* key) const;
  std::string string(const Json& j, const std::string& pointer) const;
  const Json& object(const Json& j, const std::string& pointer) const;
  const Json& array(const Json& j, const std::string& pointer) const;
  std::size_t positive(const Json& j, const std::string& pointer) const;
  void check_schema(const Json& root, const std::string& expected) const;

  const SourceMap& map() const noexcept { return map_; }

 private:
  SourceMap map_;
};

std::string escape_pointer(const std::string& token);

}  // namespace npconf::detail
