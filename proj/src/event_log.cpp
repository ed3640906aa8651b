#include "npconf/event_log.hpp"

#include <algorithm>
#include <tuple>

#include "npconf/binding_search.hpp"
#include "npconf/errors.hpp"

namespace npconf {

SyncEvent make_sync_event(ActivityName activity, std::vector<Participant> participants, Multiset<DataValue> data) {
  std::sort(participants.begin(), participants.end(),
            [](const Participant& a, const Participant& b) { return std::tie(a.agent, a.activity) < std::tie(b.agent, b.activity); });
  for (std::size_t i = 1; i < participants.size(); ++i)
    if (participants[i].agent == participants[i - 1].agent)
      throw StructuralError("agent '" + participants[i].agent.str() + "' participates twice in '" + activity.str() + "'");
  return SyncEvent{std::move(activity), std::move(participants), std::move(data)};
}

namespace {

void print_data(std::ostream& os, const Multiset<DataValue>& data) {
  for (const auto& d : data.elements()) os << ", " << d;
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const Event& e) {
  if (const auto* a = std::get_if<AgentEvent>(&e)) return os << '(' << a->activity << ", " << a->agent << ')';
  if (const auto* s = std::get_if<SystemEvent>(&e)) {
    os << '(' << s->activity << ", SN, {";
    bool first = true;
    for (const auto& r : s->involved) {
      os << (first ? "" : ", ") << r;
      first = false;
    }
    os << '}';
    print_data(os, s->data);
    return os << ')';
  }
  const auto& y = std::get<SyncEvent>(e);
  os << '(' << y.activity << ", SN, {";
  bool first = true;
  for (const auto& p : y.participants) {
    os << (first ? "" : ", ") << '(' << p.activity << ", " << p.agent << ')';
    first = false;
  }
  os << '}';
  print_data(os, y.data);
  return os << ')';
}

std::ostream& operator<<(std::ostream& os, const Trace& t) {
  os << "<";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << t[i];
  return os << ">";
}

std::set<AgentName> agents_of(const Event& e) {
  if (const auto* a = std::get_if<AgentEvent>(&e)) return {a->agent};
  if (const auto* s = std::get_if<SystemEvent>(&e)) return s->involved;
  std::set<AgentName> out;
  for (const auto& p : std::get<SyncEvent>(e).participants) out.insert(p.agent);
  return out;
}

LogHeader header_for(const NestedNet& np, std::optional<std::string> model) {
  LogHeader h;
  h.model = std::move(model);
  for (const auto& [agent, cls] : np.agents) h.roster.insert(agent);
  for (const auto& [name, domain] : np.domains) {
    auto& values = h.domains[name];
    for (const auto& v : domain.values)
      if (const auto* d = std::get_if<DataValue>(&v)) values.insert(d->name);
  }
  return h;
}

namespace {

Multiset<Value> payload_of(const std::set<AgentName>& agents, const Multiset<DataValue>& data) {
  Multiset<Value> out;
  for (const auto& r : agents) out.add(r);
  for (const auto& [d, n] : data) out.add(d, n);
  return out;
}

bool has_binding_shape(const NestedNet& np, const TransitionId& t, const Multiset<Value>& payload) {
  auto admits = [&](const VariableId& v, const Value& value) {
    return value_admitted(np, np.system.type_of(t, v), value);
  };
  return !assign_payload(np.system.variables_of(t), payload, admits).empty();
}

std::vector<TransitionId> system_transitions(const NestedNet& np, const ActivityName& a, bool labelled) {
  std::vector<TransitionId> out;
  for (const auto& [t, act] : np.system.activity)
    if (act == a && np.system.sync.count(t) == static_cast<std::size_t>(labelled)) out.push_back(t);
  return out;
}

}  // namespace

SyntaxCheck syntactically_correct(const Event& e, const NestedNet& np) {
  for (const auto& r : agents_of(e))
    if (!np.has_agent(r)) throw RosterError(r.str());

  if (const auto* a = std::get_if<AgentEvent>(&e)) {
    const WorkflowNet& w = np.class_of(a->agent);
    bool synchronized_only = false;
    for (const auto& [t, act] : w.activity) {
      if (act != a->activity) continue;
      if (!w.sync.count(t)) return {true, {}};
      synchronized_only = true;
    }
    if (synchronized_only)
      return {false, "activity '" + a->activity.str() + "' of class '" + np.class_name(a->agent).str() +
                         "' only occurs synchronized"};
    return {false, "no matching transition for '" + a->activity.str() + "' in class '" +
                       np.class_name(a->agent).str() + "'"};
  }

  if (const auto* s = std::get_if<SystemEvent>(&e)) {
    const auto candidates = system_transitions(np, s->activity, false);
    if (candidates.empty()) return {false, "no matching transition for system activity '" + s->activity.str() + "'"};
    const auto payload = payload_of(s->involved, s->data);
    for (const auto& t : candidates)
      if (has_binding_shape(np, t, payload)) return {true, {}};
    return {false, "no binding of a '" + s->activity.str() + "' transition matches the event's agents and data"};
  }

  const auto& y = std::get<SyncEvent>(e);
  const auto candidates = system_transitions(np, y.activity, true);
  if (candidates.empty())
    return {false, "no matching synchronized transition for system activity '" + y.activity.str() + "'"};
  std::set<AgentName> agents;
  for (const auto& p : y.participants) agents.insert(p.agent);
  if (agents.size() != y.participants.size()) return {false, "agent participates twice"};
  const auto payload = payload_of(agents, y.data);

  std::string diagnosis;
  for (const auto& t : candidates) {
    const SyncLabel& label = np.system.sync.at(t);
    bool partners = true;
    for (const auto& p : y.participants) {
      const WorkflowNet& w = np.class_of(p.agent);
      bool found = false;
      for (const auto& [ti, act] : w.activity)
        if (act == p.activity && w.sync_of(ti) == label) found = true;
      if (!found) {
        partners = false;
        diagnosis = "agent '" + p.agent.str() + "' has no '" + p.activity.str() + "' transition labelled '" +
                    label.str() + "'";
        break;
      }
    }
    if (!partners) continue;
    if (has_binding_shape(np, t, payload)) return {true, {}};
    diagnosis = "no binding of a '" + y.activity.str() + "' transition matches the event's agents and data";
  }
  return {false, diagnosis};
}

SyntaxReport log_syntactically_correct(const EventLog& log, const NestedNet& np) {
  SyntaxReport report;
  std::size_t index = 0;
  for (const auto& [trace, n] : log.traces) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
      try {
        auto check = syntactically_correct(trace[i], np);
        if (!check.ok) report.failures.push_back({index, i, std::move(check.diagnosis)});
      } catch (const RosterError& err) {
        report.failures.push_back({index, i, err.what()});
      }
    }
    ++index;
  }
  return report;
}

}  // namespace npconf
