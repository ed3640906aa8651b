#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "npconf/multiset.hpp"
#include "npconf/nested_net.hpp"
#include "npconf/value.hpp"

namespace npconf {

/// Activity performed by one agent alone.
struct AgentEvent {
  ActivityName activity;
  AgentName agent;
  friend auto operator<=>(const AgentEvent&, const AgentEvent&) = default;
  friend bool operator==(const AgentEvent&, const AgentEvent&) = default;
};

/// Activity of the system net, involving some agents and data.
struct SystemEvent {
  ActivityName activity;
  std::set<AgentName> involved;
  Multiset<DataValue> data;
  friend auto operator<=>(const SystemEvent&, const SystemEvent&) = default;
  friend bool operator==(const SystemEvent&, const SystemEvent&) = default;
};

struct Participant {
  ActivityName activity;
  AgentName agent;
  friend auto operator<=>(const Participant&, const Participant&) = default;
  friend bool operator==(const Participant&, const Participant&) = default;
};

/// System activity performed together with one activity of each participant.
/// Participants are kept sorted by agent and never repeat an agent.
struct SyncEvent {
  ActivityName activity;
  std::vector<Participant> participants;
  Multiset<DataValue> data;
  friend auto operator<=>(const SyncEvent&, const SyncEvent&) = default;
  friend bool operator==(const SyncEvent&, const SyncEvent&) = default;
};

using Event = std::variant<AgentEvent, SystemEvent, SyncEvent>;
using Trace = std::vector<Event>;

/// Sorts participants by agent. Throws StructuralError on a repeated agent.
SyncEvent make_sync_event(ActivityName activity, std::vector<Participant> participants,
                          Multiset<DataValue> data = {});

std::ostream& operator<<(std::ostream& os, const Event& e);
std::ostream& operator<<(std::ostream& os, const Trace& t);

/// Agents named by an event.
std::set<AgentName> agents_of(const Event& e);

struct LogHeader {
  std::optional<std::string> model;
  std::set<AgentName> roster;
  std::map<DomainName, std::set<std::string>> domains;
  friend bool operator==(const LogHeader&, const LogHeader&) = default;
};

struct EventLog {
  LogHeader header;
  Multiset<Trace> traces;
  friend bool operator==(const EventLog&, const EventLog&) = default;
};

/// Header listing the model's agents and domains.
LogHeader header_for(const NestedNet& np, std::optional<std::string> model = std::nullopt);

struct SyntaxCheck {
  bool ok = false;
  std::string diagnosis;  ///< empty when ok
};

/// Static matchability of one event against some step of np: labels, agent
/// classes, sync-label agreement and binding arity/typing. Independent of any
/// marking. Throws RosterError if the event names an agent np does not know.
SyntaxCheck syntactically_correct(const Event& e, const NestedNet& np);

struct SyntaxFailure {
  std::size_t trace = 0;  ///< index among the log's distinct traces, canonical order
  std::size_t event = 0;
  std::string diagnosis;
  friend bool operator==(const SyntaxFailure&, const SyntaxFailure&) = default;
};

struct SyntaxReport {
  std::vector<SyntaxFailure> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Checks every event. Unknown agents are recorded as failures rather than
/// thrown.
SyntaxReport log_syntactically_correct(const EventLog& log, const NestedNet& np);

}  // namespace npconf
