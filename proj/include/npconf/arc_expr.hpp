#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "npconf/ids.hpp"
#include "npconf/multiset.hpp"
#include "npconf/value.hpp"

namespace npconf {

/// Variable or constant.
using Atom = std::variant<VariableId, Value>;

using Binding = std::map<VariableId, Value>;

/// Arc expression as a flattened formal sum of atoms. Concrete syntax:
///   expr := atom ('+' atom)*
///   atom := identifier | '`' literal '`'
/// Identifiers are variables, backtick-quoted literals are constants.
struct ArcExpr {
  std::vector<Atom> terms;

  std::set<VariableId> variables() const;
  bool has_constants() const;
  /// Number of occurrences of v in the sum.
  std::size_t occurrences(const VariableId& v) const;

  friend bool operator==(const ArcExpr&, const ArcExpr&) = default;
};

/// Parses the concrete syntax. Constants become data values of
/// `constant_domain`. Throws ParseError (line 1, column of the offending
/// character) on malformed input.
ArcExpr parse_arc_expr(std::string_view text, const DomainName& constant_domain = {});

/// Canonical text form, e.g. "x + `5`".
std::string to_string(const ArcExpr& e);

/// Multiset sum of b(v) for variable terms and c for constant terms. Throws
/// BindingError if a variable is unbound.
Multiset<Value> eval_arc_expr(const ArcExpr& e, const Binding& b);

}  // namespace npconf
