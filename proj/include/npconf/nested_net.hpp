#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "npconf/arc_expr.hpp"
#include "npconf/petri_net.hpp"
#include "npconf/validation.hpp"
#include "npconf/value.hpp"

namespace npconf {

/// Net places are typed by a set of element nets, atom places by a data domain.
using PlaceType = std::variant<std::set<NetId>, DomainName>;
/// Variables range over the net tokens of one element net or over a data domain.
using VarType = std::variant<NetId, DomainName>;

struct SystemNet {
  PetriNet net;
  std::map<PlaceId, PlaceType> place_type;
  std::map<TransitionId, ActivityName> activity;
  std::map<TransitionId, SyncLabel> sync;
  std::map<TransitionId, std::map<VariableId, VarType>> variables;
  std::map<PetriNet::InputArc, ArcExpr> input_expr;
  std::map<PetriNet::OutputArc, ArcExpr> output_expr;

  bool is_net_place(const PlaceId& p) const;
  std::optional<SyncLabel> sync_of(const TransitionId& t) const;
  const ArcExpr& input(const PlaceId& p, const TransitionId& t) const;
  const ArcExpr& output(const TransitionId& t, const PlaceId& p) const;
  /// Distinct variables on arcs adjacent to t, in id order.
  std::vector<VariableId> variables_of(const TransitionId& t) const;
  const VarType& type_of(const TransitionId& t, const VariableId& v) const;
};

/// Marking of a nested net: net places hold distinguishable net tokens
/// (agent name + inner marking), atom places hold multisets of data values.
/// Every agent appears at most once. The representation is canonical
/// (sorted, no empty entries), so markings compare and hash structurally.
class NpMarking {
 public:
  /// Throws StructuralError if the agent already resides somewhere.
  void put_net_token(const PlaceId& p, const AgentName& agent, Marking inner);
  /// Removes and returns the inner marking. Throws StructuralError if absent.
  Marking take_net_token(const PlaceId& p, const AgentName& agent);

  void add_atoms(const PlaceId& p, const Multiset<Value>& values);
  void add_atom(const PlaceId& p, const Value& v, std::size_t n = 1) {
    Multiset<Value> ms;
    ms.add(v, n);
    add_atoms(p, ms);
  }
  /// Throws MultisetUnderflow if p lacks the values.
  void remove_atoms(const PlaceId& p, const Multiset<Value>& values);

  std::optional<PlaceId> locate(const AgentName& agent) const;
  /// Throws RosterError if the agent is absent.
  const Marking& inner(const AgentName& agent) const;
  void set_inner(const AgentName& agent, Marking m);

  const std::map<AgentName, Marking>& net_tokens(const PlaceId& p) const;
  const Multiset<Value>& atoms(const PlaceId& p) const;
  std::set<AgentName> agents() const;

  const std::map<PlaceId, std::map<AgentName, Marking>>& net_places() const noexcept { return net_; }
  const std::map<PlaceId, Multiset<Value>>& atom_places() const noexcept { return atoms_; }

  friend bool operator==(const NpMarking&, const NpMarking&) = default;
  friend auto operator<=>(const NpMarking&, const NpMarking&) = default;

 private:
  std::map<PlaceId, std::map<AgentName, Marking>> net_;
  std::map<PlaceId, Multiset<Value>> atoms_;
};

std::ostream& operator<<(std::ostream& os, const NpMarking& m);

struct NestedNet {
  std::map<DomainName, Domain> domains;
  std::map<NetId, WorkflowNet> elements;
  SystemNet system;
  /// The class function: agent name -> element net.
  std::map<AgentName, NetId> agents;
  NpMarking initial_marking;
  std::vector<NpMarking> final_markings;

  /// Element net of an agent. Throws RosterError for unknown agents.
  const WorkflowNet& class_of(const AgentName& agent) const;
  const NetId& class_name(const AgentName& agent) const;
  bool has_agent(const AgentName& agent) const { return agents.count(agent) != 0; }
  bool is_final(const NpMarking& m) const;
};

struct ElementAutonomousStep {
  AgentName agent;
  TransitionId transition;
  friend auto operator<=>(const ElementAutonomousStep&, const ElementAutonomousStep&) = default;
  friend bool operator==(const ElementAutonomousStep&, const ElementAutonomousStep&) = default;
};

struct SystemAutonomousStep {
  TransitionId transition;
  Binding binding;
  friend auto operator<=>(const SystemAutonomousStep&, const SystemAutonomousStep&) = default;
  friend bool operator==(const SystemAutonomousStep&, const SystemAutonomousStep&) = default;
};

struct SynchronizationStep {
  TransitionId transition;
  Binding binding;
  /// One inner transition per involved agent, sorted by agent.
  std::vector<std::pair<AgentName, TransitionId>> participants;
  friend auto operator<=>(const SynchronizationStep&, const SynchronizationStep&) = default;
  friend bool operator==(const SynchronizationStep&, const SynchronizationStep&) = default;
};

using Step = std::variant<ElementAutonomousStep, SystemAutonomousStep, SynchronizationStep>;

std::ostream& operator<<(std::ostream& os, const Step& s);

/// Checks the well-formedness conditions of a two-level nested net: element
/// nets are WF-nets, node ids are disjoint, places and variables are typed
/// consistently, arc expressions respect net/atom typing, the agent roster
/// names existing element nets, and the initial and final markings are well
/// typed with every roster agent present exactly once. Net tokens must start
/// at their source place and every final marking must hold them at the sink.
ValidationReport validate_nested_net(const NestedNet& np);

/// Structural conservativeness: for every system transition, each net-typed
/// variable occurs as often on output arcs as on input arcs.
ValidationReport check_conservative(const NestedNet& np);

/// Within the system net and within each element net, transitions that share
/// an activity name must share their sync label (or lack of one). Compositional
/// checking ignores sync labels, so its verdicts agree with whole-net replay
/// only on nets passing this check.
ValidationReport check_label_determinism(const NestedNet& np);

/// Agents fit a variable typed by their class, data values one typed by their
/// domain.
bool value_admitted(const NestedNet& np, const VarType& type, const Value& value);

/// Agents bound to net-typed variables of t, i.e. the net tokens involved in
/// firing t with b.
std::set<AgentName> involved_agents(const NestedNet& np, const TransitionId& t, const Binding& b);

/// Values bound to the distinct variables of t (agent names for net tokens).
Multiset<Value> binding_payload(const NestedNet& np, const TransitionId& t, const Binding& b);

/// True iff b binds every variable of t with a well-typed value and every
/// input arc's demand is present in m.
bool system_enabled(const NestedNet& np, const NpMarking& m, const TransitionId& t, const Binding& b);

/// Bindings of t enabled in m whose payload equals `payload`.
std::vector<Binding> system_bindings_for_payload(const NestedNet& np, const NpMarking& m, const TransitionId& t,
                                                 const Multiset<Value>& payload);

std::vector<Step> enabled_steps(const NestedNet& np, const NpMarking& m);

bool is_step_enabled(const NestedNet& np, const NpMarking& m, const Step& s);

/// Applies one step. Synchronization steps fire the inner transitions first
/// and then move the updated net tokens. Throws NotEnabledError.
NpMarking apply_step(const NestedNet& np, const NpMarking& m, const Step& s);

/// apply_step without the enabledness check. s must be enabled in m, as
/// every step returned by enabled_steps(np, m) is.
NpMarking apply_enabled_step(const NestedNet& np, const NpMarking& m, const Step& s);

/// True iff the steps are sequentially enabled from the initial marking and
/// end in a declared final marking.
bool is_run_np(const NestedNet& np, std::span<const Step> steps);

}  // namespace npconf
