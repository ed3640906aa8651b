#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "npconf/ids.hpp"
#include "npconf/multiset.hpp"
#include "npconf/replay_search.hpp"
#include "npconf/validation.hpp"

namespace npconf {

/// Place/transition net N = (P, T, F). Arcs are unweighted; the flow relation
/// is a set, so repeated arcs collapse.
class PetriNet {
 public:
  using InputArc = std::pair<PlaceId, TransitionId>;
  using OutputArc = std::pair<TransitionId, PlaceId>;

  PetriNet() = default;

  /// Throws StructuralError if places and transitions share an id or an arc
  /// names a missing node.
  PetriNet(std::set<PlaceId> places, std::set<TransitionId> transitions,
           std::span<const InputArc> inputs, std::span<const OutputArc> outputs);

  const std::set<PlaceId>& places() const noexcept { return places_; }
  const std::set<TransitionId>& transitions() const noexcept { return transitions_; }
  const std::set<InputArc>& input_arcs() const noexcept { return inputs_; }
  const std::set<OutputArc>& output_arcs() const noexcept { return outputs_; }

  bool has_place(const PlaceId& p) const { return places_.count(p) != 0; }
  bool has_transition(const TransitionId& t) const { return transitions_.count(t) != 0; }

  /// •t and t•
  const std::set<PlaceId>& preset(const TransitionId& t) const;
  const std::set<PlaceId>& postset(const TransitionId& t) const;
  /// •p and p•
  const std::set<TransitionId>& producers(const PlaceId& p) const;
  const std::set<TransitionId>& consumers(const PlaceId& p) const;

 private:
  std::set<PlaceId> places_;
  std::set<TransitionId> transitions_;
  std::set<InputArc> inputs_;
  std::set<OutputArc> outputs_;
  std::map<TransitionId, std::set<PlaceId>> pre_t_, post_t_;
  std::map<PlaceId, std::set<TransitionId>> pre_p_, post_p_;
};

using Marking = Multiset<PlaceId>;

/// Transitions whose preset is contained in m. Throws StructuralError if m
/// marks a place the net does not have.
std::set<TransitionId> enabled_transitions(const PetriNet& net, const Marking& m);

bool is_enabled(const PetriNet& net, const Marking& m, const TransitionId& t);

/// m - •t + t•. Throws NotEnabledError listing the unmarked preset places.
Marking fire(const PetriNet& net, const Marking& m, const TransitionId& t);

/// A workflow net with activity labelling δ and partial sync labelling λ.
struct WorkflowNet {
  PetriNet net;
  PlaceId source;
  PlaceId sink;
  std::map<TransitionId, ActivityName> activity;
  std::map<TransitionId, SyncLabel> sync;

  const ActivityName& activity_of(const TransitionId& t) const;
  std::optional<SyncLabel> sync_of(const TransitionId& t) const;

  Marking initial_marking() const { return Marking{source}; }
  Marking final_marking() const { return Marking{sink}; }
};

/// Lists every violated workflow-net condition; empty iff w is a WF-net with a
/// total activity labelling.
ValidationReport validate_workflow_net(const WorkflowNet& w);

/// Decides whether `run` is a run of w, i.e. some firing sequence from {i} to
/// {o} carries exactly these activity labels. Sync labels are ignored.
/// Candidates are explored in lexicographic transition order.
ReplayResult<TransitionId> is_run_wf(const WorkflowNet& w, std::span<const ActivityName> run,
                                     const SearchLimits& limits = {});

}  // namespace npconf
