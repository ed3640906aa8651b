#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "npconf/arc_expr.hpp"
#include "npconf/petri_net.hpp"
#include "npconf/replay_search.hpp"
#include "npconf/validation.hpp"
#include "npconf/value.hpp"

namespace npconf {

/// Place id -> multiset of atomic values. Places without tokens are not stored.
class ColoredMarking {
 public:
  const Multiset<Value>& tokens(const PlaceId& p) const;
  void add(const PlaceId& p, const Multiset<Value>& values);
  void add(const PlaceId& p, const Value& v, std::size_t n = 1);
  /// Throws MultisetUnderflow if p does not hold the values.
  void remove(const PlaceId& p, const Multiset<Value>& values);

  const std::map<PlaceId, Multiset<Value>>& places() const noexcept { return places_; }

  friend bool operator==(const ColoredMarking&, const ColoredMarking&) = default;
  friend auto operator<=>(const ColoredMarking&, const ColoredMarking&) = default;

 private:
  std::map<PlaceId, Multiset<Value>> places_;
};

std::ostream& operator<<(std::ostream& os, const ColoredMarking& m);

struct ColoredNet {
  PetriNet net;
  std::map<DomainName, Domain> domains;
  std::map<PlaceId, DomainName> place_type;
  /// Variable typing, per transition.
  std::map<TransitionId, std::map<VariableId, DomainName>> var_type;
  std::map<PetriNet::InputArc, ArcExpr> input_expr;
  std::map<PetriNet::OutputArc, ArcExpr> output_expr;
  std::map<TransitionId, ActivityName> activity;
  ColoredMarking initial_marking;
  std::vector<ColoredMarking> final_markings;

  const Domain& domain_of_place(const PlaceId& p) const;
  const Domain& domain_of_variable(const TransitionId& t, const VariableId& v) const;
};

/// Typing and referential integrity: every arc has an expression whose terms
/// fit the adjacent place's type, every variable is declared, markings are
/// well typed.
ValidationReport validate_colored_net(const ColoredNet& cn);

/// Distinct variables occurring on arcs adjacent to t, in id order.
std::vector<VariableId> variables_of(const ColoredNet& cn, const TransitionId& t);

/// True iff W(p,t)(b) ⊆ M(p) for every input place p, and b binds every
/// variable of t to a value of its declared domain.
bool is_enabled(const ColoredNet& cn, const ColoredMarking& m, const TransitionId& t, const Binding& b);

/// All bindings of t's variables (over their finite domains) that enable t
/// in m, in ascending order.
std::vector<Binding> enabled_bindings(const ColoredNet& cn, const ColoredMarking& m, const TransitionId& t);

/// M'(p) = (M(p) \ W(p,t)(b)) ∪ W(t,p)(b). Throws NotEnabledError if (t,b)
/// is not enabled, BindingError if b leaves a variable unbound or mistyped.
ColoredMarking fire_colored(const ColoredNet& cn, const ColoredMarking& m, const TransitionId& t,
                            const Binding& b);

/// Values bound to the distinct variables of t, each variable counted once.
Multiset<Value> binding_payload(const ColoredNet& cn, const TransitionId& t, const Binding& b);

struct BindingElement {
  TransitionId transition;
  Binding binding;

  friend bool operator==(const BindingElement&, const BindingElement&) = default;
};

/// One observed step of a colored run: an activity and the values its binding
/// assigned.
struct ColoredEvent {
  ActivityName activity;
  Multiset<Value> payload;

  friend auto operator<=>(const ColoredEvent&, const ColoredEvent&) = default;
  friend bool operator==(const ColoredEvent&, const ColoredEvent&) = default;
};

/// Decides whether some binding-element sequence from the initial marking to
/// a declared final marking matches `run` step by step (activity label and
/// binding payload).
ReplayResult<BindingElement> is_run_colored(const ColoredNet& cn, std::span<const ColoredEvent> run,
                                            const SearchLimits& limits = {});

}  // namespace npconf
