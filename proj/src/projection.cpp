#include "npconf/projection.hpp"

#include <algorithm>

#include "npconf/errors.hpp"

namespace npconf {

AgentTrace project_trace_agent(const Trace& trace, const AgentName& r) {
  AgentTrace out;
  for (const auto& e : trace) {
    if (const auto* a = std::get_if<AgentEvent>(&e)) {
      if (a->agent == r) out.push_back(a->activity);
    } else if (const auto* y = std::get_if<SyncEvent>(&e)) {
      for (const auto& p : y->participants)
        if (p.agent == r) out.push_back(p.activity);
    }
  }
  return out;
}

SystemTrace project_trace_system(const Trace& trace) {
  SystemTrace out;
  for (const auto& e : trace) {
    if (const auto* s = std::get_if<SystemEvent>(&e)) {
      ProjectedSystemEvent p{s->activity, {}};
      for (const auto& r : s->involved) p.payload.add(r);
      for (const auto& [d, n] : s->data) p.payload.add(d, n);
      out.push_back(std::move(p));
    } else if (const auto* y = std::get_if<SyncEvent>(&e)) {
      ProjectedSystemEvent p{y->activity, {}};
      for (const auto& part : y->participants) p.payload.add(part.agent);
      for (const auto& [d, n] : y->data) p.payload.add(d, n);
      out.push_back(std::move(p));
    }
  }
  return out;
}

ComponentLogs project_log(const EventLog& log, const std::set<AgentName>& roster) {
  ComponentLogs out;
  for (const auto& r : roster) out.agent_logs[r];
  for (const auto& [trace, n] : log.traces) {
    for (const auto& e : trace)
      for (const auto& r : agents_of(e))
        if (!roster.count(r)) throw RosterError(r.str());
    out.system_log.add(project_trace_system(trace), n);
    for (const auto& r : roster) out.agent_logs[r].add(project_trace_agent(trace, r), n);
  }
  return out;
}

ColoredMarking project_marking_system(const NpMarking& m) {
  ColoredMarking out;
  for (const auto& [p, tokens] : m.net_places())
    for (const auto& [agent, inner] : tokens) out.add(p, Value{agent});
  for (const auto& [p, atoms] : m.atom_places()) out.add(p, atoms);
  return out;
}

Marking project_marking_agent(const NpMarking& m, const AgentName& r) { return m.inner(r); }

namespace {

DomainName union_domain(const std::set<NetId>& nets) {
  std::string name = "net";
  for (const auto& n : nets) name += ":" + n.str();
  return DomainName{name};
}

}  // namespace

ColoredNet system_component(const NestedNet& np) {
  const SystemNet& sn = np.system;
  ColoredNet cn;
  cn.net = sn.net;
  cn.domains = np.domains;
  cn.activity = sn.activity;
  cn.input_expr = sn.input_expr;
  cn.output_expr = sn.output_expr;

  for (const auto& [id, w] : np.elements) {
    Domain d{DomainName{id.str()}, {}};
    for (const auto& [agent, cls] : np.agents)
      if (cls == id) d.values.insert(agent);
    cn.domains[d.name] = std::move(d);
  }
  for (const auto& [p, type] : sn.place_type) {
    if (const auto* dom = std::get_if<DomainName>(&type)) {
      cn.place_type[p] = *dom;
      continue;
    }
    const auto& nets = std::get<std::set<NetId>>(type);
    if (nets.size() == 1) {
      cn.place_type[p] = DomainName{nets.begin()->str()};
      continue;
    }
    const DomainName name = union_domain(nets);
    Domain d{name, {}};
    for (const auto& n : nets)
      if (auto it = cn.domains.find(DomainName{n.str()}); it != cn.domains.end())
        d.values.insert(it->second.values.begin(), it->second.values.end());
    cn.domains[name] = std::move(d);
    cn.place_type[p] = name;
  }
  for (const auto& [t, vars] : sn.variables)
    for (const auto& [v, type] : vars)
      cn.var_type[t][v] = std::visit([](const auto& x) { return DomainName{x.str()}; }, type);

  cn.initial_marking = project_marking_system(np.initial_marking);
  for (const auto& m : np.final_markings) {
    auto projected = project_marking_system(m);
    if (std::find(cn.final_markings.begin(), cn.final_markings.end(), projected) == cn.final_markings.end())
      cn.final_markings.push_back(std::move(projected));
  }
  return cn;
}

std::ostream& operator<<(std::ostream& os, const SystemTrace& t) {
  os << "<";
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << (i ? ", " : "") << "(" << t[i].activity << ", {";
    bool first = true;
    for (const auto& v : t[i].payload.elements()) {
      os << (first ? "" : ", ") << v;
      first = false;
    }
    os << "})";
  }
  return os << ">";
}

std::ostream& operator<<(std::ostream& os, const AgentTrace& t) {
  os << "<";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << t[i];
  return os << ">";
}

}  // namespace npconf
