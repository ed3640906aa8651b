#include "npconf/petri_net.hpp"

#include <deque>
#include <string>

#include "npconf/errors.hpp"

namespace npconf {
namespace {

const std::set<PlaceId> kNoPlaces;
const std::set<TransitionId> kNoTransitions;

}  // namespace

PetriNet::PetriNet(std::set<PlaceId> places, std::set<TransitionId> transitions,
                   std::span<const InputArc> inputs, std::span<const OutputArc> outputs)
    : places_(std::move(places)), transitions_(std::move(transitions)) {
  for (const auto& p : places_)
    if (transitions_.count(TransitionId{p.str()}))
      throw StructuralError("id '" + p.str() + "' is both a place and a transition");

  for (const auto& [p, t] : inputs) {
    if (!has_place(p) || !has_transition(t))
      throw StructuralError("arc " + p.str() + " -> " + t.str() + " names a missing node");
    inputs_.insert({p, t});
    pre_t_[t].insert(p);
    post_p_[p].insert(t);
  }
  for (const auto& [t, p] : outputs) {
    if (!has_place(p) || !has_transition(t))
      throw StructuralError("arc " + t.str() + " -> " + p.str() + " names a missing node");
    outputs_.insert({t, p});
    post_t_[t].insert(p);
    pre_p_[p].insert(t);
  }
}

const std::set<PlaceId>& PetriNet::preset(const TransitionId& t) const {
  if (!has_transition(t)) throw StructuralError("unknown transition '" + t.str() + "'");
  auto it = pre_t_.find(t);
  return it == pre_t_.end() ? kNoPlaces : it->second;
}

const std::set<PlaceId>& PetriNet::postset(const TransitionId& t) const {
  if (!has_transition(t)) throw StructuralError("unknown transition '" + t.str() + "'");
  auto it = post_t_.find(t);
  return it == post_t_.end() ? kNoPlaces : it->second;
}

const std::set<TransitionId>& PetriNet::producers(const PlaceId& p) const {
  if (!has_place(p)) throw StructuralError("unknown place '" + p.str() + "'");
  auto it = pre_p_.find(p);
  return it == pre_p_.end() ? kNoTransitions : it->second;
}

const std::set<TransitionId>& PetriNet::consumers(const PlaceId& p) const {
  if (!has_place(p)) throw StructuralError("unknown place '" + p.str() + "'");
  auto it = post_p_.find(p);
  return it == post_p_.end() ? kNoTransitions : it->second;
}

namespace {

void check_marking(const PetriNet& net, const Marking& m) {
  for (const auto& [p, n] : m)
    if (!net.has_place(p)) throw StructuralError("marking references unknown place '" + p.str() + "'");
}

}  // namespace

bool is_enabled(const PetriNet& net, const Marking& m, const TransitionId& t) {
  for (const auto& p : net.preset(t))
    if (m.count(p) == 0) return false;
  return true;
}

std::set<TransitionId> enabled_transitions(const PetriNet& net, const Marking& m) {
  check_marking(net, m);
  std::set<TransitionId> out;
  for (const auto& t : net.transitions())
    if (is_enabled(net, m, t)) out.insert(t);
  return out;
}

Marking fire(const PetriNet& net, const Marking& m, const TransitionId& t) {
  check_marking(net, m);
  std::vector<std::string> missing;
  for (const auto& p : net.preset(t))
    if (m.count(p) == 0) missing.push_back(p.str());
  if (!missing.empty()) throw NotEnabledError(t.str(), std::move(missing));

  Marking next = m;
  for (const auto& p : net.preset(t)) next.remove(p);
  for (const auto& p : net.postset(t)) next.add(p);
  return next;
}

const ActivityName& WorkflowNet::activity_of(const TransitionId& t) const {
  auto it = activity.find(t);
  if (it == activity.end()) throw StructuralError("transition '" + t.str() + "' has no activity label");
  return it->second;
}

std::optional<SyncLabel> WorkflowNet::sync_of(const TransitionId& t) const {
  auto it = sync.find(t);
  if (it == sync.end()) return std::nullopt;
  return it->second;
}

namespace {

// Node ids of a net as plain strings; places and transitions are disjoint.
template <class Step>
std::set<std::string> reach(const std::string& start, Step&& step) {
  std::set<std::string> seen{start};
  std::deque<std::string> queue{start};
  while (!queue.empty()) {
    auto node = queue.front();
    queue.pop_front();
    for (const auto& next : step(node))
      if (seen.insert(next).second) queue.push_back(next);
  }
  return seen;
}

}  // namespace

ValidationReport validate_workflow_net(const WorkflowNet& w) {
  ValidationReport report;
  const PetriNet& net = w.net;

  const bool source_ok = net.has_place(w.source);
  const bool sink_ok = net.has_place(w.sink);
  if (!source_ok) report.add("bad-source", w.source.str(), "source is not a place of the net");
  if (!sink_ok) report.add("bad-sink", w.sink.str(), "sink is not a place of the net");
  if (source_ok && sink_ok && w.source == w.sink)
    report.add("bad-sink", w.sink.str(), "source and sink must be distinct places");
  if (source_ok && !net.producers(w.source).empty())
    report.add("source-has-input", w.source.str(), "preset of the source place must be empty");
  if (sink_ok && !net.consumers(w.sink).empty())
    report.add("sink-has-output", w.sink.str(), "postset of the sink place must be empty");

  for (const auto& t : net.transitions())
    if (!w.activity.count(t)) report.add("unlabelled-transition", t.str(), "transition has no activity label");
  for (const auto& [t, a] : w.activity)
    if (!net.has_transition(t)) report.add("unknown-transition", t.str(), "activity label on a missing transition");
  for (const auto& [t, l] : w.sync)
    if (!net.has_transition(t)) report.add("unknown-transition", t.str(), "sync label on a missing transition");

  if (!source_ok || !sink_ok) return report;

  auto successors = [&](const std::string& node) {
    std::vector<std::string> out;
    if (net.has_place(PlaceId{node})) {
      for (const auto& t : net.consumers(PlaceId{node})) out.push_back(t.str());
    } else {
      for (const auto& p : net.postset(TransitionId{node})) out.push_back(p.str());
    }
    return out;
  };
  auto predecessors = [&](const std::string& node) {
    std::vector<std::string> out;
    if (net.has_place(PlaceId{node})) {
      for (const auto& t : net.producers(PlaceId{node})) out.push_back(t.str());
    } else {
      for (const auto& p : net.preset(TransitionId{node})) out.push_back(p.str());
    }
    return out;
  };
  const auto forward = reach(w.source.str(), successors);
  const auto backward = reach(w.sink.str(), predecessors);

  auto check_node = [&](const std::string& node) {
    if (!forward.count(node) || !backward.count(node))
      report.add("not-on-path", node, "node is not on a path from source to sink");
  };
  for (const auto& p : net.places()) check_node(p.str());
  for (const auto& t : net.transitions()) check_node(t.str());
  return report;
}

ReplayResult<TransitionId> is_run_wf(const WorkflowNet& w, std::span<const ActivityName> run,
                                     const SearchLimits& limits) {
  const Marking final_marking = w.final_marking();
  auto expand = [&](const Marking& m, std::size_t i) {
    std::vector<std::pair<TransitionId, Marking>> out;
    for (const auto& [t, a] : w.activity) {
      if (a != run[i] || !is_enabled(w.net, m, t)) continue;
      out.emplace_back(t, fire(w.net, m, t));
    }
    return out;
  };
  auto is_final = [&](const Marking& m) { return m == final_marking; };
  return replay_search<Marking, TransitionId>(w.initial_marking(), run.size(), expand, is_final, limits);
}

}  // namespace npconf
