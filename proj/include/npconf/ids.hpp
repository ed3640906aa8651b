#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace npconf {

/// A string identifier tagged with the kind of thing it names. Distinct tags
/// do not convert into each other, so a place id can never be passed where a
/// transition id or an agent name is expected.
template <class Tag>
class Name {
 public:
  Name() = default;
  Name(std::string value) : value_(std::move(value)) {}
  Name(const char* value) : value_(value) {}
  explicit Name(std::string_view value) : value_(value) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const Name&, const Name&) = default;
  friend bool operator==(const Name&, const Name&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Name& n) {
    return os << n.value_;
  }

 private:
  std::string value_;
};

using PlaceId = Name<struct PlaceTag>;
using TransitionId = Name<struct TransitionTag>;
using AgentName = Name<struct AgentTag>;
using ActivityName = Name<struct ActivityTag>;
using SyncLabel = Name<struct SyncLabelTag>;
using VariableId = Name<struct VariableTag>;
using DomainName = Name<struct DomainTag>;
using NetId = Name<struct NetTag>;

}  // namespace npconf

template <class Tag>
struct std::hash<npconf::Name<Tag>> {
  std::size_t operator()(const npconf::Name<Tag>& n) const noexcept {
    return std::hash<std::string>{}(n.str());
  }
};
