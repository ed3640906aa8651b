#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "npconf/arc_expr.hpp"

namespace npconf {

/// Every way to assign the elements of `payload` one-to-one to `vars` such
/// that `admits(var, value)` holds. Returns nothing when the sizes differ.
/// Results are unique and sorted.
template <class Admits>
std::vector<Binding> assign_payload(const std::vector<VariableId>& vars, const Multiset<Value>& payload,
                                    Admits&& admits) {
  std::set<Binding> found;
  if (vars.size() != payload.size()) return {};

  std::map<Value, std::size_t> left(payload.counts().begin(), payload.counts().end());
  Binding current;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      found.insert(current);
      return;
    }
    for (auto& [value, n] : left) {
      if (n == 0 || !admits(vars[i], value)) continue;
      --n;
      current[vars[i]] = value;
      go(i + 1);
      current.erase(vars[i]);
      ++n;
    }
  };
  go(0);
  return {found.begin(), found.end()};
}

}  // namespace npconf
