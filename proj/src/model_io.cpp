#include "npconf/model_io.hpp"

#include "json_support.hpp"
#include "npconf/arc_expr.hpp"

namespace npconf {

using detail::Json;
using detail::Reader;

namespace {

std::string idx(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }
std::string key(const std::string& ptr, const std::string& k) { return ptr + "/" + detail::escape_pointer(k); }

struct NodeLists {
  std::set<PlaceId> places;
  std::set<TransitionId> transitions;
  std::vector<PetriNet::InputArc> inputs;
  std::vector<PetriNet::OutputArc> outputs;
};

class ModelReader : public Reader {
 public:
  ModelReader(std::string_view text, ValidationReport& issues) : Reader(text), issues_(issues) {}

  void add_place(NodeLists& n, const std::string& id, const std::string& scope) {
    if (!n.places.insert(PlaceId{id}).second) issues_.add("duplicate-id", scope + "/" + id, "place listed twice");
  }

  /// Returns false if the transition was dropped.
  bool add_transition(NodeLists& n, const std::string& id, const std::string& scope) {
    if (n.places.count(PlaceId{id})) {
      issues_.add("id-overlap", scope + "/" + id, "id names both a place and a transition");
      return false;
    }
    if (!n.transitions.insert(TransitionId{id}).second) {
      issues_.add("duplicate-id", scope + "/" + id, "transition listed twice");
      return false;
    }
    return true;
  }

  /// Returns 0 for a dropped arc, 1 for place->transition, 2 for
  /// transition->place.
  int add_arc(NodeLists& n, const std::string& from, const std::string& to, const std::string& scope) {
    if (n.places.count(PlaceId{from}) && n.transitions.count(TransitionId{to})) {
      n.inputs.emplace_back(PlaceId{from}, TransitionId{to});
      return 1;
    }
    if (n.transitions.count(TransitionId{from}) && n.places.count(PlaceId{to})) {
      n.outputs.emplace_back(TransitionId{from}, PlaceId{to});
      return 2;
    }
    issues_.add("bad-arc", scope + "/" + from + "->" + to, "arc must connect an existing place and transition");
    return 0;
  }

  WorkflowNet element_net(const Json& j, const std::string& ptr, const std::string& scope) {
    object(j, ptr);
    WorkflowNet w;
    NodeLists n;
    const auto& places = array(member(j, ptr, "places"), ptr + "/places");
    for (std::size_t i = 0; i < places.size(); ++i) add_place(n, string(places[i], idx(ptr + "/places", i)), scope);
    w.source = PlaceId{string(member(j, ptr, "source"), ptr + "/source")};
    w.sink = PlaceId{string(member(j, ptr, "sink"), ptr + "/sink")};
    const auto& transitions = array(member(j, ptr, "transitions"), ptr + "/transitions");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      const std::string tp = idx(ptr + "/transitions", i);
      object(transitions[i], tp);
      const std::string id = string(member(transitions[i], tp, "id"), tp + "/id");
      if (!add_transition(n, id, scope)) continue;
      w.activity[TransitionId{id}] = ActivityName{string(member(transitions[i], tp, "activity"), tp + "/activity")};
      if (const Json* s = optional_member(transitions[i], "sync"))
        w.sync[TransitionId{id}] = SyncLabel{string(*s, tp + "/sync")};
    }
    const auto& arcs = array(member(j, ptr, "arcs"), ptr + "/arcs");
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const std::string ap = idx(ptr + "/arcs", i);
      if (!arcs[i].is_array() || arcs[i].size() != 2) fail(ap, "an arc is a [from, to] pair");
      add_arc(n, string(arcs[i][0], ap + "/0"), string(arcs[i][1], ap + "/1"), scope);
    }
    w.net = PetriNet(n.places, n.transitions, n.inputs, n.outputs);
    return w;
  }

  VarType var_type(const std::string& name, const NestedNet& np) const {
    if (np.elements.count(NetId{name})) return NetId{name};
    return DomainName{name};
  }

  void marking(const Json& j, const std::string& ptr, NestedNet& np, NpMarking& m) {
    object(j, ptr);
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string pp = key(ptr, it.key());
      const PlaceId p{it.key()};
      auto type = np.system.place_type.find(p);
      if (type == np.system.place_type.end()) {
        issues_.add("bad-marking", it.key(), "marking names unknown place");
        continue;
      }
      if (const auto* dom = std::get_if<DomainName>(&type->second)) {
        array(it.value(), pp);
        for (std::size_t i = 0; i < it.value().size(); ++i)
          m.add_atom(p, DataValue{*dom, string(it.value()[i], idx(pp, i))});
        continue;
      }
      object(it.value(), pp);
      for (auto a = it.value().begin(); a != it.value().end(); ++a) {
        const std::string ap = key(pp, a.key());
        object(a.value(), ap);
        Marking inner;
        for (auto q = a.value().begin(); q != a.value().end(); ++q)
          inner.add(PlaceId{q.key()}, positive(q.value(), key(ap, q.key())));
        if (m.locate(AgentName{a.key()})) {
          issues_.add("duplicate-agent", a.key(), "net token placed twice in one marking");
          continue;
        }
        m.put_net_token(p, AgentName{a.key()}, std::move(inner));
      }
    }
  }

 private:
  ValidationReport& issues_;
};

}  // namespace

ModelDocument parse_model(std::string_view text) {
  const Json root = detail::parse_json(text);
  ModelDocument doc;
  ModelReader r(text, doc.load_issues);
  r.check_schema(root, std::string(kModelSchema));
  NestedNet& np = doc.model;

  const auto& domains = r.object(r.member(root, "", "domains"), "/domains");
  for (auto it = domains.begin(); it != domains.end(); ++it) {
    const std::string ptr = key("/domains", it.key());
    Domain d{DomainName{it.key()}, {}};
    r.array(it.value(), ptr);
    for (std::size_t i = 0; i < it.value().size(); ++i) {
      const std::string name = r.string(it.value()[i], idx(ptr, i));
      if (!d.values.insert(DataValue{d.name, name}).second)
        doc.load_issues.add("duplicate-value", it.key() + "/" + name, "domain value listed twice");
    }
    np.domains[d.name] = std::move(d);
  }

  const auto& elements = r.object(r.member(root, "", "element_nets"), "/element_nets");
  for (auto it = elements.begin(); it != elements.end(); ++it)
    np.elements[NetId{it.key()}] = r.element_net(it.value(), key("/element_nets", it.key()), "element:" + it.key());

  const std::string sp = "/system_net";
  const auto& system = r.object(r.member(root, "", "system_net"), sp);
  NodeLists n;
  const auto& places = r.array(r.member(system, sp, "places"), sp + "/places");
  for (std::size_t i = 0; i < places.size(); ++i) {
    const std::string pp = idx(sp + "/places", i);
    r.object(places[i], pp);
    const std::string id = r.string(r.member(places[i], pp, "id"), pp + "/id");
    const std::string kind = r.string(r.member(places[i], pp, "kind"), pp + "/kind");
    const Json& type = r.member(places[i], pp, "type");
    r.add_place(n, id, "system");
    if (kind == "net") {
      std::set<NetId> nets;
      r.array(type, pp + "/type");
      for (std::size_t k = 0; k < type.size(); ++k) nets.insert(NetId{r.string(type[k], idx(pp + "/type", k))});
      np.system.place_type[PlaceId{id}] = nets;
    } else if (kind == "atom") {
      np.system.place_type[PlaceId{id}] = DomainName{r.string(type, pp + "/type")};
    } else {
      r.fail(pp + "/kind", "place kind must be 'net' or 'atom'");
    }
  }

  const auto& transitions = r.array(r.member(system, sp, "transitions"), sp + "/transitions");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string tp = idx(sp + "/transitions", i);
    r.object(transitions[i], tp);
    const std::string id = r.string(r.member(transitions[i], tp, "id"), tp + "/id");
    if (!r.add_transition(n, id, "system")) continue;
    const TransitionId t{id};
    np.system.activity[t] = ActivityName{r.string(r.member(transitions[i], tp, "activity"), tp + "/activity")};
    if (const Json* s = r.optional_member(transitions[i], "sync")) np.system.sync[t] = SyncLabel{r.string(*s, tp + "/sync")};
    auto& vars = np.system.variables[t];
    if (const Json* v = r.optional_member(transitions[i], "variables")) {
      r.object(*v, tp + "/variables");
      for (auto it = v->begin(); it != v->end(); ++it)
        vars[VariableId{it.key()}] = r.var_type(r.string(it.value(), key(tp + "/variables", it.key())), np);
    }
  }

  const auto& arcs = r.array(r.member(system, sp, "arcs"), sp + "/arcs");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::string ap = idx(sp + "/arcs", i);
    r.object(arcs[i], ap);
    const std::string from = r.string(r.member(arcs[i], ap, "from"), ap + "/from");
    const std::string to = r.string(r.member(arcs[i], ap, "to"), ap + "/to");
    const std::string text_expr = r.string(r.member(arcs[i], ap, "expr"), ap + "/expr");
    const int dir = r.add_arc(n, from, to, "system");
    if (dir == 0) continue;
    const PlaceId p{dir == 1 ? from : to};
    DomainName constants;
    if (auto type = np.system.place_type.find(p); type != np.system.place_type.end())
      if (const auto* d = std::get_if<DomainName>(&type->second)) constants = *d;
    ArcExpr e;
    try {
      e = parse_arc_expr(text_expr, constants);
    } catch (const ParseError& err) {
      auto [line, col] = r.map().position(ap + "/expr");
      std::string msg = err.what();
      msg = msg.substr(msg.find(": ") + 2);
      throw ParseError("arc expression: " + msg, line, col + err.column);
    }
    if (dir == 1)
      np.system.input_expr[{p, TransitionId{to}}] = std::move(e);
    else
      np.system.output_expr[{TransitionId{from}, p}] = std::move(e);
  }
  np.system.net = PetriNet(n.places, n.transitions, n.inputs, n.outputs);

  const auto& agents = r.object(r.member(root, "", "agents"), "/agents");
  for (auto it = agents.begin(); it != agents.end(); ++it)
    np.agents[AgentName{it.key()}] = NetId{r.string(it.value(), key("/agents", it.key()))};

  r.marking(r.member(root, "", "initial_marking"), "/initial_marking", np, np.initial_marking);
  const auto& finals = r.array(r.member(root, "", "final_markings"), "/final_markings");
  for (std::size_t i = 0; i < finals.size(); ++i) {
    NpMarking m;
    r.marking(finals[i], idx("/final_markings", i), np, m);
    np.final_markings.push_back(std::move(m));
  }
  return doc;
}

ValidationReport validate_model(const ModelDocument& doc) {
  ValidationReport report = doc.load_issues;
  report.merge(validate_nested_net(doc.model));
  report.merge(check_conservative(doc.model));
  return report;
}

NestedNet load_model(std::string_view text) {
  ModelDocument doc = parse_model(text);
  ValidationReport report = validate_model(doc);
  if (!report.ok()) throw ModelError(std::move(report));
  return std::move(doc.model);
}

namespace {

Json marking_json(const NpMarking& m) {
  Json out = Json::object();
  for (const auto& [p, tokens] : m.net_places()) {
    Json agents = Json::object();
    for (const auto& [agent, inner] : tokens) {
      Json in = Json::object();
      for (const auto& [q, n] : inner) in[q.str()] = n;
      agents[agent.str()] = in;
    }
    out[p.str()] = agents;
  }
  for (const auto& [p, atoms] : m.atom_places()) {
    Json values = Json::array();
    for (const auto& v : atoms.elements()) values.push_back(std::get<DataValue>(v).name);
    out[p.str()] = values;
  }
  return out;
}

}  // namespace

std::string serialize_model(const NestedNet& np) {
  Json root;
  root["schema"] = kModelSchema;
  root["domains"] = Json::object();
  for (const auto& [name, d] : np.domains) {
    Json values = Json::array();
    for (const auto& v : d.values) values.push_back(std::get<DataValue>(v).name);
    root["domains"][name.str()] = values;
  }
  root["element_nets"] = Json::object();
  for (const auto& [id, w] : np.elements) {
    Json e;
    e["places"] = Json::array();
    for (const auto& p : w.net.places()) e["places"].push_back(p.str());
    e["source"] = w.source.str();
    e["sink"] = w.sink.str();
    e["transitions"] = Json::array();
    for (const auto& t : w.net.transitions()) {
      Json tj{{"id", t.str()}, {"activity", w.activity_of(t).str()}};
      if (auto l = w.sync_of(t)) tj["sync"] = l->str();
      e["transitions"].push_back(tj);
    }
    e["arcs"] = Json::array();
    for (const auto& [p, t] : w.net.input_arcs()) e["arcs"].push_back(Json::array({p.str(), t.str()}));
    for (const auto& [t, p] : w.net.output_arcs()) e["arcs"].push_back(Json::array({t.str(), p.str()}));
    root["element_nets"][id.str()] = e;
  }

  const SystemNet& sn = np.system;
  Json s;
  s["places"] = Json::array();
  for (const auto& p : sn.net.places()) {
    const auto& type = sn.place_type.at(p);
    if (const auto* nets = std::get_if<std::set<NetId>>(&type)) {
      Json types = Json::array();
      for (const auto& n : *nets) types.push_back(n.str());
      s["places"].push_back(Json{{"id", p.str()}, {"kind", "net"}, {"type", types}});
    } else {
      s["places"].push_back(Json{{"id", p.str()}, {"kind", "atom"}, {"type", std::get<DomainName>(type).str()}});
    }
  }
  s["transitions"] = Json::array();
  for (const auto& t : sn.net.transitions()) {
    Json tj{{"id", t.str()}, {"activity", sn.activity.at(t).str()}};
    if (auto l = sn.sync_of(t)) tj["sync"] = l->str();
    Json vars = Json::object();
    if (auto it = sn.variables.find(t); it != sn.variables.end())
      for (const auto& [v, type] : it->second)
        vars[v.str()] = std::visit([](const auto& x) { return x.str(); }, type);
    tj["variables"] = vars;
    s["transitions"].push_back(tj);
  }
  s["arcs"] = Json::array();
  for (const auto& [arc, e] : sn.input_expr)
    s["arcs"].push_back(Json{{"from", arc.first.str()}, {"to", arc.second.str()}, {"expr", to_string(e)}});
  for (const auto& [arc, e] : sn.output_expr)
    s["arcs"].push_back(Json{{"from", arc.first.str()}, {"to", arc.second.str()}, {"expr", to_string(e)}});
  root["system_net"] = s;

  root["agents"] = Json::object();
  for (const auto& [agent, cls] : np.agents) root["agents"][agent.str()] = cls.str();
  root["initial_marking"] = marking_json(np.initial_marking);
  root["final_markings"] = Json::array();
  for (const auto& m : np.final_markings) root["final_markings"].push_back(marking_json(m));
  return detail::pretty(root, 4);
}

}  // namespace npconf
