#pragma once

#include <map>
#include <ostream>
#include <set>
#include <vector>

#include "npconf/colored_net.hpp"
#include "npconf/event_log.hpp"
#include "npconf/nested_net.hpp"

namespace npconf {

/// A system or sync event seen from the system net: the activity and the
/// agents and data it touched, merged into one payload.
using ProjectedSystemEvent = ColoredEvent;
using SystemTrace = std::vector<ProjectedSystemEvent>;
using AgentTrace = std::vector<ActivityName>;

struct ComponentLogs {
  Multiset<SystemTrace> system_log;
  std::map<AgentName, Multiset<AgentTrace>> agent_logs;
  friend bool operator==(const ComponentLogs&, const ComponentLogs&) = default;
};

/// Activities of r: its own agent events and its part in sync events.
AgentTrace project_trace_agent(const Trace& trace, const AgentName& r);

/// System and sync events as (activity, agents + data); agent events dropped.
SystemTrace project_trace_system(const Trace& trace);

/// Projects every trace onto the system net and onto every roster agent.
/// Frequencies are preserved and empty projections kept. Throws RosterError if
/// the log names an agent outside the roster.
ComponentLogs project_log(const EventLog& log, const std::set<AgentName>& roster);

/// Net tokens replaced by their agent names.
ColoredMarking project_marking_system(const NpMarking& m);

/// Inner marking of r. Throws RosterError if r is absent.
Marking project_marking_agent(const NpMarking& m, const AgentName& r);

/// The system net as a colored net over atomic agent names: one domain per
/// element net holding the names of its agents, a union domain for net places
/// typed by several element nets, sync labels dropped, markings projected.
ColoredNet system_component(const NestedNet& np);

std::ostream& operator<<(std::ostream& os, const SystemTrace& t);
std::ostream& operator<<(std::ostream& os, const AgentTrace& t);

}  // namespace npconf
