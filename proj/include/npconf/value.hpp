#pragma once

#include <compare>
#include <ostream>
#include <set>
#include <string>
#include <variant>

#include "npconf/ids.hpp"

namespace npconf {

/// An atomic data token: a value tagged with the domain it was drawn from.
struct DataValue {
  DomainName domain;
  std::string name;

  friend auto operator<=>(const DataValue&, const DataValue&) = default;
  friend bool operator==(const DataValue&, const DataValue&) = default;
};

/// Atomic colored token. Agent names appear as atomic tokens once net tokens
/// are projected away from a system net.
using Value = std::variant<AgentName, DataValue>;

inline bool is_agent(const Value& v) noexcept { return std::holds_alternative<AgentName>(v); }

inline std::string to_string(const Value& v) {
  if (const auto* a = std::get_if<AgentName>(&v)) return a->str();
  const auto& d = std::get<DataValue>(v);
  return d.domain.str() + ":" + d.name;
}

inline std::ostream& operator<<(std::ostream& os, const DataValue& d) {
  return os << d.domain << ':' << d.name;
}

inline std::ostream& operator<<(std::ostream& os, const Value& v) { return os << to_string(v); }

/// A finite, explicitly enumerated color set.
struct Domain {
  DomainName name;
  std::set<Value> values;

  bool contains(const Value& v) const { return values.count(v) != 0; }
};

}  // namespace npconf
