#include "npconf/log_io.hpp"

#include <fstream>
#include <sstream>

#include "json_support.hpp"

namespace npconf {

using detail::Json;
using detail::Reader;

namespace {

Json data_json(const Multiset<DataValue>& data) {
  Json out = Json::array();
  for (const auto& d : data.elements()) out.push_back(Json{{"domain", d.domain.str()}, {"value", d.name}});
  return out;
}

Json event_json(const Event& e) {
  if (const auto* a = std::get_if<AgentEvent>(&e))
    return Json{{"type", "agent"}, {"activity", a->activity.str()}, {"agent", a->agent.str()}};
  if (const auto* s = std::get_if<SystemEvent>(&e)) {
    Json involved = Json::array();
    for (const auto& r : s->involved) involved.push_back(r.str());
    return Json{{"type", "system"}, {"activity", s->activity.str()}, {"involved", involved}, {"data", data_json(s->data)}};
  }
  const auto& y = std::get<SyncEvent>(e);
  Json participants = Json::array();
  for (const auto& p : y.participants) participants.push_back(Json{{"activity", p.activity.str()}, {"agent", p.agent.str()}});
  return Json{{"type", "sync"}, {"activity", y.activity.str()}, {"participants", participants}, {"data", data_json(y.data)}};
}

class LogReader : public Reader {
 public:
  using Reader::Reader;

  LogHeader header;

  DataValue data_value(const Json& j, const std::string& ptr) const {
    object(j, ptr);
    DomainName domain{string(member(j, ptr, "domain"), ptr + "/domain")};
    std::string value = string(member(j, ptr, "value"), ptr + "/value");
    auto it = header.domains.find(domain);
    if (it == header.domains.end()) fail(ptr + "/domain", "undeclared domain '" + domain.str() + "'");
    if (!it->second.count(value)) fail(ptr + "/value", "value '" + value + "' is not in domain '" + domain.str() + "'");
    return {domain, value};
  }

  Multiset<DataValue> data(const Json& obj, const std::string& ptr) const {
    Multiset<DataValue> out;
    const Json* d = optional_member(obj, "data");
    if (!d) return out;
    array(*d, ptr + "/data");
    for (std::size_t i = 0; i < d->size(); ++i) out.add(data_value((*d)[i], ptr + "/data/" + std::to_string(i)));
    return out;
  }

  Event event(const Json& j, const std::string& ptr) const {
    object(j, ptr);
    const std::string type = string(member(j, ptr, "type"), ptr + "/type");
    ActivityName activity{string(member(j, ptr, "activity"), ptr + "/activity")};
    if (type == "agent") return AgentEvent{activity, AgentName{string(member(j, ptr, "agent"), ptr + "/agent")}};
    if (type == "system") {
      SystemEvent e{activity, {}, data(j, ptr)};
      const auto& involved = array(member(j, ptr, "involved"), ptr + "/involved");
      for (std::size_t i = 0; i < involved.size(); ++i) {
        const std::string p = ptr + "/involved/" + std::to_string(i);
        if (!e.involved.insert(AgentName{string(involved[i], p)}).second) fail(p, "agent listed twice");
      }
      return e;
    }
    if (type == "sync") {
      const auto& parts = array(member(j, ptr, "participants"), ptr + "/participants");
      std::vector<Participant> participants;
      std::set<AgentName> seen;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string p = ptr + "/participants/" + std::to_string(i);
        object(parts[i], p);
        Participant part{ActivityName{string(member(parts[i], p, "activity"), p + "/activity")},
                         AgentName{string(member(parts[i], p, "agent"), p + "/agent")}};
        if (!seen.insert(part.agent).second)
          fail(p + "/agent", "agent '" + part.agent.str() + "' participates twice in one sync event");
        participants.push_back(std::move(part));
      }
      return make_sync_event(activity, std::move(participants), data(j, ptr));
    }
    fail(ptr + "/type", "unknown event type '" + type + "'");
  }
};

}  // namespace

EventLog parse_log(std::string_view text) {
  const Json root = detail::parse_json(text);
  LogReader r(text);
  r.check_schema(root, std::string(kLogSchema));

  EventLog log;
  if (const Json* model = r.optional_member(root, "model")) {
    if (!model->is_null()) log.header.model = r.string(*model, "/model");
  }
  if (const Json* roster = r.optional_member(root, "roster")) {
    r.array(*roster, "/roster");
    for (std::size_t i = 0; i < roster->size(); ++i)
      log.header.roster.insert(AgentName{r.string((*roster)[i], "/roster/" + std::to_string(i))});
  }
  if (const Json* domains = r.optional_member(root, "domains")) {
    r.object(*domains, "/domains");
    for (auto it = domains->begin(); it != domains->end(); ++it) {
      const std::string ptr = "/domains/" + detail::escape_pointer(it.key());
      auto& values = log.header.domains[DomainName{it.key()}];
      r.array(it.value(), ptr);
      for (std::size_t i = 0; i < it.value().size(); ++i) values.insert(r.string(it.value()[i], ptr + "/" + std::to_string(i)));
    }
  }
  r.header = log.header;

  const auto& traces = r.array(r.member(root, "", "traces"), "/traces");
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const std::string ptr = "/traces/" + std::to_string(i);
    r.object(traces[i], ptr);
    const std::size_t frequency = r.positive(r.member(traces[i], ptr, "frequency"), ptr + "/frequency");
    const auto& events = r.array(r.member(traces[i], ptr, "events"), ptr + "/events");
    Trace trace;
    for (std::size_t k = 0; k < events.size(); ++k) trace.push_back(r.event(events[k], ptr + "/events/" + std::to_string(k)));
    log.traces.add(trace, frequency);
  }
  return log;
}

std::string serialize_log(const EventLog& log) {
  Json root;
  root["schema"] = kLogSchema;
  if (log.header.model) root["model"] = *log.header.model;
  root["roster"] = Json::array();
  for (const auto& r : log.header.roster) root["roster"].push_back(r.str());
  root["domains"] = Json::object();
  for (const auto& [d, values] : log.header.domains) {
    Json vs = Json::array();
    for (const auto& v : values) vs.push_back(v);
    root["domains"][d.str()] = vs;
  }
  root["traces"] = Json::array();
  for (const auto& [trace, n] : log.traces) {
    Json events = Json::array();
    for (const auto& e : trace) events.push_back(event_json(e));
    root["traces"].push_back(Json{{"frequency", n}, {"events", events}});
  }
  return detail::pretty(root, 4);
}

std::string serialize_system_log(const Multiset<SystemTrace>& log) {
  Json root;
  root["schema"] = kSystemLogSchema;
  root["traces"] = Json::array();
  for (const auto& [trace, n] : log) {
    Json events = Json::array();
    for (const auto& e : trace) {
      Json agents = Json::array();
      Json data = Json::array();
      for (const auto& v : e.payload.elements()) {
        if (const auto* a = std::get_if<AgentName>(&v))
          agents.push_back(a->str());
        else
          data.push_back(Json{{"domain", std::get<DataValue>(v).domain.str()}, {"value", std::get<DataValue>(v).name}});
      }
      events.push_back(Json{{"activity", e.activity.str()}, {"agents", agents}, {"data", data}});
    }
    root["traces"].push_back(Json{{"frequency", n}, {"events", events}});
  }
  return detail::pretty(root, 4);
}

Multiset<SystemTrace> parse_system_log(std::string_view text) {
  const Json root = detail::parse_json(text);
  Reader r(text);
  r.check_schema(root, std::string(kSystemLogSchema));
  Multiset<SystemTrace> out;
  const auto& traces = r.array(r.member(root, "", "traces"), "/traces");
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const std::string ptr = "/traces/" + std::to_string(i);
    r.object(traces[i], ptr);
    const std::size_t frequency = r.positive(r.member(traces[i], ptr, "frequency"), ptr + "/frequency");
    const auto& events = r.array(r.member(traces[i], ptr, "events"), ptr + "/events");
    SystemTrace trace;
    for (std::size_t k = 0; k < events.size(); ++k) {
      const std::string ep = ptr + "/events/" + std::to_string(k);
      r.object(events[k], ep);
      ProjectedSystemEvent e{ActivityName{r.string(r.member(events[k], ep, "activity"), ep + "/activity")}, {}};
      const auto& agents = r.array(r.member(events[k], ep, "agents"), ep + "/agents");
      for (std::size_t a = 0; a < agents.size(); ++a)
        e.payload.add(AgentName{r.string(agents[a], ep + "/agents/" + std::to_string(a))});
      const auto& data = r.array(r.member(events[k], ep, "data"), ep + "/data");
      for (std::size_t d = 0; d < data.size(); ++d) {
        const std::string dp = ep + "/data/" + std::to_string(d);
        r.object(data[d], dp);
        e.payload.add(DataValue{DomainName{r.string(r.member(data[d], dp, "domain"), dp + "/domain")},
                                r.string(r.member(data[d], dp, "value"), dp + "/value")});
      }
      trace.push_back(std::move(e));
    }
    out.add(trace, frequency);
  }
  return out;
}

std::string serialize_agent_log(const AgentName& agent, const Multiset<AgentTrace>& log) {
  EventLog out;
  out.header.roster.insert(agent);
  for (const auto& [trace, n] : log) {
    Trace t;
    for (const auto& a : trace) t.push_back(AgentEvent{a, agent});
    out.traces.add(t, n);
  }
  return serialize_log(out);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

}  // namespace npconf
