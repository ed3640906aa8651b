#include "npconf/nested_net.hpp"

#include <algorithm>
#include <functional>

#include "npconf/binding_search.hpp"
#include "npconf/errors.hpp"

namespace npconf {
namespace {

const std::map<AgentName, Marking> kNoTokens;
const Multiset<Value> kNoAtoms;

}  // namespace

// ---------------------------------------------------------------- SystemNet

bool SystemNet::is_net_place(const PlaceId& p) const {
  auto it = place_type.find(p);
  if (it == place_type.end()) throw StructuralError("place '" + p.str() + "' has no type");
  return std::holds_alternative<std::set<NetId>>(it->second);
}

std::optional<SyncLabel> SystemNet::sync_of(const TransitionId& t) const {
  auto it = sync.find(t);
  if (it == sync.end()) return std::nullopt;
  return it->second;
}

const ArcExpr& SystemNet::input(const PlaceId& p, const TransitionId& t) const {
  auto it = input_expr.find({p, t});
  if (it == input_expr.end()) throw StructuralError("arc " + p.str() + "->" + t.str() + " has no expression");
  return it->second;
}

const ArcExpr& SystemNet::output(const TransitionId& t, const PlaceId& p) const {
  auto it = output_expr.find({t, p});
  if (it == output_expr.end()) throw StructuralError("arc " + t.str() + "->" + p.str() + " has no expression");
  return it->second;
}

std::vector<VariableId> SystemNet::variables_of(const TransitionId& t) const {
  std::set<VariableId> vars;
  for (const auto& p : net.preset(t)) {
    auto v = input(p, t).variables();
    vars.insert(v.begin(), v.end());
  }
  for (const auto& p : net.postset(t)) {
    auto v = output(t, p).variables();
    vars.insert(v.begin(), v.end());
  }
  return {vars.begin(), vars.end()};
}

const VarType& SystemNet::type_of(const TransitionId& t, const VariableId& v) const {
  auto it = variables.find(t);
  if (it == variables.end() || !it->second.count(v))
    throw BindingError("variable '" + v.str() + "' is not declared on transition '" + t.str() + "'");
  return it->second.at(v);
}

// ---------------------------------------------------------------- NpMarking

void NpMarking::put_net_token(const PlaceId& p, const AgentName& agent, Marking inner) {
  if (locate(agent)) throw StructuralError("net token '" + agent.str() + "' would be cloned");
  net_[p].emplace(agent, std::move(inner));
}

Marking NpMarking::take_net_token(const PlaceId& p, const AgentName& agent) {
  auto place = net_.find(p);
  if (place == net_.end() || !place->second.count(agent))
    throw StructuralError("net token '" + agent.str() + "' does not reside in '" + p.str() + "'");
  Marking inner = std::move(place->second.at(agent));
  place->second.erase(agent);
  if (place->second.empty()) net_.erase(place);
  return inner;
}

void NpMarking::add_atoms(const PlaceId& p, const Multiset<Value>& values) {
  if (values.empty()) return;
  atoms_[p] += values;
}

void NpMarking::remove_atoms(const PlaceId& p, const Multiset<Value>& values) {
  if (values.empty()) return;
  auto it = atoms_.find(p);
  if (it == atoms_.end()) throw MultisetUnderflow("place '" + p.str() + "' holds no atomic tokens");
  it->second -= values;
  if (it->second.empty()) atoms_.erase(it);
}

std::optional<PlaceId> NpMarking::locate(const AgentName& agent) const {
  for (const auto& [p, tokens] : net_)
    if (tokens.count(agent)) return p;
  return std::nullopt;
}

const Marking& NpMarking::inner(const AgentName& agent) const {
  for (const auto& [p, tokens] : net_)
    if (auto it = tokens.find(agent); it != tokens.end()) return it->second;
  throw RosterError(agent.str());
}

void NpMarking::set_inner(const AgentName& agent, Marking m) {
  for (auto& [p, tokens] : net_)
    if (auto it = tokens.find(agent); it != tokens.end()) {
      it->second = std::move(m);
      return;
    }
  throw RosterError(agent.str());
}

const std::map<AgentName, Marking>& NpMarking::net_tokens(const PlaceId& p) const {
  auto it = net_.find(p);
  return it == net_.end() ? kNoTokens : it->second;
}

const Multiset<Value>& NpMarking::atoms(const PlaceId& p) const {
  auto it = atoms_.find(p);
  return it == atoms_.end() ? kNoAtoms : it->second;
}

std::set<AgentName> NpMarking::agents() const {
  std::set<AgentName> out;
  for (const auto& [p, tokens] : net_)
    for (const auto& [agent, m] : tokens) out.insert(agent);
  return out;
}

std::ostream& operator<<(std::ostream& os, const NpMarking& m) {
  os << '[';
  bool first = true;
  for (const auto& [p, tokens] : m.net_places()) {
    if (!first) os << ", ";
    first = false;
    os << p << ": {";
    bool first_token = true;
    for (const auto& [agent, inner] : tokens) {
      if (!first_token) os << ", ";
      first_token = false;
      os << '(' << agent << ", " << inner << ')';
    }
    os << '}';
  }
  for (const auto& [p, atoms] : m.atom_places()) {
    if (!first) os << ", ";
    first = false;
    os << p << ": " << atoms;
  }
  return os << ']';
}

// ---------------------------------------------------------------- NestedNet

const NetId& NestedNet::class_name(const AgentName& agent) const {
  auto it = agents.find(agent);
  if (it == agents.end()) throw RosterError(agent.str());
  return it->second;
}

const WorkflowNet& NestedNet::class_of(const AgentName& agent) const {
  const NetId& id = class_name(agent);
  auto it = elements.find(id);
  if (it == elements.end()) throw StructuralError("agent '" + agent.str() + "' has unknown class '" + id.str() + "'");
  return it->second;
}

bool NestedNet::is_final(const NpMarking& m) const {
  return std::find(final_markings.begin(), final_markings.end(), m) != final_markings.end();
}

std::ostream& operator<<(std::ostream& os, const Step& s) {
  std::visit(
      [&](const auto& step) {
        using T = std::decay_t<decltype(step)>;
        if constexpr (std::is_same_v<T, ElementAutonomousStep>) {
          os << "element(" << step.agent << ", " << step.transition << ")";
        } else {
          os << (std::is_same_v<T, SystemAutonomousStep> ? "system(" : "sync(") << step.transition << ", {";
          bool first = true;
          for (const auto& [v, value] : step.binding) {
            if (!first) os << ", ";
            first = false;
            os << v << "=" << value;
          }
          os << "}";
          if constexpr (std::is_same_v<T, SynchronizationStep>) {
            for (const auto& [agent, t] : step.participants) os << ", " << agent << ":" << t;
          }
          os << ")";
        }
      },
      s);
  return os;
}

// ---------------------------------------------------------------- validation

namespace {

std::string describe(const PlaceType& type) {
  if (const auto* d = std::get_if<DomainName>(&type)) return d->str();
  std::string out = "{";
  for (const auto& n : std::get<std::set<NetId>>(type)) out += (out.size() > 1 ? "," : "") + n.str();
  return out + "}";
}

void validate_marking(const NestedNet& np, const NpMarking& m, const std::string& what, bool final_marking,
                      ValidationReport& report) {
  std::set<AgentName> seen;
  for (const auto& [p, tokens] : m.net_places()) {
    auto pt = np.system.place_type.find(p);
    if (!np.system.net.has_place(p) || pt == np.system.place_type.end()) {
      report.add("bad-marking", what, "unknown place '" + p.str() + "'");
      continue;
    }
    const auto* nets = std::get_if<std::set<NetId>>(&pt->second);
    if (!nets) {
      report.add("bad-marking", what, "net token in atom place '" + p.str() + "'");
      continue;
    }
    for (const auto& [agent, inner] : tokens) {
      seen.insert(agent);
      auto cls = np.agents.find(agent);
      if (cls == np.agents.end()) {
        report.add("bad-marking", what, "unknown agent '" + agent.str() + "'");
        continue;
      }
      if (!nets->count(cls->second))
        report.add("bad-marking", what,
                   "agent '" + agent.str() + "' of class '" + cls->second.str() + "' in place '" + p.str() +
                       "' typed " + describe(pt->second));
      auto element = np.elements.find(cls->second);
      if (element == np.elements.end()) continue;
      const WorkflowNet& w = element->second;
      bool places_ok = true;
      for (const auto& [q, n] : inner)
        if (!w.net.has_place(q)) {
          report.add("bad-marking", what, "inner marking of '" + agent.str() + "' marks unknown place '" + q.str() + "'");
          places_ok = false;
        }
      if (!places_ok) continue;
      if (!final_marking && inner != w.initial_marking())
        report.add("bad-initial-inner", what, "net token '" + agent.str() + "' must start at its source place");
      if (final_marking && inner != w.final_marking())
        report.add("bad-final-inner", what, "net token '" + agent.str() + "' must end at its sink place");
    }
  }
  for (const auto& [p, atoms] : m.atom_places()) {
    auto pt = np.system.place_type.find(p);
    if (!np.system.net.has_place(p) || pt == np.system.place_type.end()) {
      report.add("bad-marking", what, "unknown place '" + p.str() + "'");
      continue;
    }
    const auto* dom = std::get_if<DomainName>(&pt->second);
    if (!dom) {
      report.add("bad-marking", what, "atomic tokens in net place '" + p.str() + "'");
      continue;
    }
    auto d = np.domains.find(*dom);
    if (d == np.domains.end()) continue;
    for (const auto& [value, n] : atoms)
      if (!d->second.contains(value))
        report.add("bad-marking", what, "value " + to_string(value) + " is not in domain '" + dom->str() + "'");
  }
  for (const auto& [agent, cls] : np.agents)
    if (!seen.count(agent)) report.add("missing-agent", what, "agent '" + agent.str() + "' has no net token");
}

}  // namespace

ValidationReport validate_nested_net(const NestedNet& np) {
  ValidationReport report;
  const SystemNet& sn = np.system;

  for (const auto& [name, domain] : np.domains) {
    if (domain.values.empty()) report.add("empty-domain", name.str(), "domain has no values");
    for (const auto& v : domain.values) {
      const auto* d = std::get_if<DataValue>(&v);
      if (!d || d->domain != name)
        report.add("bad-domain", name.str(), "value " + to_string(v) + " is not tagged with its domain");
    }
    if (np.elements.count(NetId{name.str()}))
      report.add("name-clash", name.str(), "name is used by both a domain and an element net");
  }

  for (const auto& [id, w] : np.elements) report.merge(validate_workflow_net(w), "element:" + id.str());

  // Node ids are one global namespace.
  std::map<std::string, std::string> owner;
  auto claim = [&](const std::string& id, const std::string& where) {
    auto [it, fresh] = owner.emplace(id, where);
    if (!fresh) report.add("id-overlap", id, "id used in " + it->second + " and " + where);
  };
  for (const auto& p : sn.net.places()) claim(p.str(), "system place");
  for (const auto& t : sn.net.transitions()) claim(t.str(), "system transition");
  for (const auto& [id, w] : np.elements) {
    for (const auto& p : w.net.places()) claim(p.str(), "place of " + id.str());
    for (const auto& t : w.net.transitions()) claim(t.str(), "transition of " + id.str());
  }

  for (const auto& p : sn.net.places()) {
    auto it = sn.place_type.find(p);
    if (it == sn.place_type.end()) {
      report.add("untyped-place", p.str(), "system place has no type");
      continue;
    }
    if (const auto* nets = std::get_if<std::set<NetId>>(&it->second)) {
      if (nets->empty()) report.add("empty-net-type", p.str(), "net place type must name at least one element net");
      for (const auto& n : *nets)
        if (!np.elements.count(n)) report.add("unknown-element-net", p.str(), "type names unknown element net '" + n.str() + "'");
    } else if (!np.domains.count(std::get<DomainName>(it->second))) {
      report.add("unknown-domain", p.str(), "type names unknown domain '" + std::get<DomainName>(it->second).str() + "'");
    }
  }
  for (const auto& [p, type] : sn.place_type)
    if (!sn.net.has_place(p)) report.add("unknown-place", p.str(), "type given for a missing place");

  for (const auto& t : sn.net.transitions()) {
    if (!sn.activity.count(t)) report.add("unlabelled-transition", t.str(), "system transition has no activity label");
    auto vars = sn.variables.find(t);
    if (vars == sn.variables.end()) continue;
    for (const auto& [v, type] : vars->second) {
      if (const auto* n = std::get_if<NetId>(&type)) {
        if (!np.elements.count(*n)) report.add("unknown-element-net", t.str() + "." + v.str(), "variable typed by unknown element net");
      } else if (!np.domains.count(std::get<DomainName>(type))) {
        report.add("unknown-domain", t.str() + "." + v.str(), "variable typed by unknown domain");
      }
    }
  }
  for (const auto& [t, l] : sn.sync)
    if (!sn.net.has_transition(t)) report.add("unknown-transition", t.str(), "sync label on a missing transition");

  auto check_arc = [&](const PlaceId& p, const TransitionId& t, const ArcExpr* e, const std::string& subject) {
    if (!e) {
      report.add("missing-expression", subject, "arc has no expression");
      return;
    }
    auto pt = sn.place_type.find(p);
    if (pt == sn.place_type.end()) return;
    auto vars = sn.variables.find(t);
    const bool net_place = std::holds_alternative<std::set<NetId>>(pt->second);
    std::set<VariableId> seen;
    for (const auto& term : e->terms) {
      if (const auto* c = std::get_if<Value>(&term)) {
        if (net_place) {
          report.add("constant-on-net-arc", subject, "constants are only allowed on atom-place arcs");
          continue;
        }
        const auto& dom = std::get<DomainName>(pt->second);
        auto d = np.domains.find(dom);
        const auto* dv = std::get_if<DataValue>(c);
        if (d != np.domains.end() && (!dv || !d->second.contains(Value{DataValue{dom, dv->name}})))
          report.add("type-mismatch", subject, "constant " + to_string(*c) + " is not in domain '" + dom.str() + "'");
        continue;
      }
      const auto& v = std::get<VariableId>(term);
      if (vars == sn.variables.end() || !vars->second.count(v)) {
        report.add("undeclared-variable", subject, "variable '" + v.str() + "' is not declared on '" + t.str() + "'");
        continue;
      }
      const VarType& vt = vars->second.at(v);
      if (net_place) {
        const auto* n = std::get_if<NetId>(&vt);
        if (!n)
          report.add("type-mismatch", subject, "net-place arc uses data variable '" + v.str() + "'");
        else if (!std::get<std::set<NetId>>(pt->second).count(*n))
          report.add("type-mismatch", subject, "variable '" + v.str() + "' of class '" + n->str() + "' does not fit place type " + describe(pt->second));
      } else {
        const auto* d = std::get_if<DomainName>(&vt);
        if (!d || *d != std::get<DomainName>(pt->second))
          report.add("type-mismatch", subject, "variable '" + v.str() + "' does not have the place's domain");
        if (!seen.insert(v).second)
          report.add("repeated-variable", subject, "atom-place expressions are sums of distinct variables");
      }
    }
  };
  for (const auto& arc : sn.net.input_arcs()) {
    auto it = sn.input_expr.find(arc);
    check_arc(arc.first, arc.second, it == sn.input_expr.end() ? nullptr : &it->second,
              arc.first.str() + "->" + arc.second.str());
  }
  for (const auto& arc : sn.net.output_arcs()) {
    auto it = sn.output_expr.find(arc);
    check_arc(arc.second, arc.first, it == sn.output_expr.end() ? nullptr : &it->second,
              arc.first.str() + "->" + arc.second.str());
  }

  for (const auto& [agent, cls] : np.agents)
    if (!np.elements.count(cls)) report.add("unknown-class", agent.str(), "agent class '" + cls.str() + "' is not an element net");

  validate_marking(np, np.initial_marking, "initial", false, report);
  if (np.final_markings.empty()) report.add("no-final-marking", "final", "at least one final marking must be declared");
  for (std::size_t i = 0; i < np.final_markings.size(); ++i)
    validate_marking(np, np.final_markings[i], "final[" + std::to_string(i) + "]", true, report);
  return report;
}

ValidationReport check_conservative(const NestedNet& np) {
  ValidationReport report;
  const SystemNet& sn = np.system;
  for (const auto& t : sn.net.transitions()) {
    auto vars = sn.variables.find(t);
    if (vars == sn.variables.end()) continue;
    for (const auto& [v, type] : vars->second) {
      if (!std::holds_alternative<NetId>(type)) continue;
      std::size_t in = 0, out = 0;
      for (const auto& p : sn.net.preset(t))
        if (auto it = sn.input_expr.find({p, t}); it != sn.input_expr.end()) in += it->second.occurrences(v);
      for (const auto& p : sn.net.postset(t))
        if (auto it = sn.output_expr.find({t, p}); it != sn.output_expr.end()) out += it->second.occurrences(v);
      if (out > in)
        report.add("cloning", t.str(), "net token bound to '" + v.str() + "' is produced " + std::to_string(out) +
                                           " times but consumed " + std::to_string(in) + " times");
      else if (in > out)
        report.add("disappearance", t.str(), "net token bound to '" + v.str() + "' is consumed " + std::to_string(in) +
                                                 " times but produced " + std::to_string(out) + " times");
    }
  }
  return report;
}

ValidationReport check_label_determinism(const NestedNet& np) {
  ValidationReport report;
  auto check = [&](const std::map<TransitionId, ActivityName>& activity,
                   const std::map<TransitionId, SyncLabel>& sync, const std::string& scope) {
    std::map<ActivityName, std::set<std::string>> labels;
    for (const auto& [t, a] : activity) {
      auto it = sync.find(t);
      labels[a].insert(it == sync.end() ? std::string("-") : "λ:" + it->second.str());
    }
    for (const auto& [a, ls] : labels)
      if (ls.size() > 1)
        report.add("label-nondeterminism", scope + "/" + a.str(),
                   "transitions with activity '" + a.str() + "' disagree on their sync label");
  };
  check(np.system.activity, np.system.sync, "system");
  for (const auto& [id, w] : np.elements) check(w.activity, w.sync, "element:" + id.str());
  return report;
}

// ---------------------------------------------------------------- semantics

namespace {

}  // namespace

bool value_admitted(const NestedNet& np, const VarType& type, const Value& value) {
  if (const auto* cls = std::get_if<NetId>(&type)) {
    const auto* agent = std::get_if<AgentName>(&value);
    if (!agent) return false;
    auto it = np.agents.find(*agent);
    return it != np.agents.end() && it->second == *cls;
  }
  const auto* data = std::get_if<DataValue>(&value);
  if (!data) return false;
  auto d = np.domains.find(std::get<DomainName>(type));
  return d != np.domains.end() && d->second.contains(value);
}

namespace {

bool binding_well_typed(const NestedNet& np, const TransitionId& t, const Binding& b) {
  for (const auto& v : np.system.variables_of(t)) {
    auto it = b.find(v);
    if (it == b.end() || !value_admitted(np, np.system.type_of(t, v), it->second)) return false;
  }
  return true;
}

// Demand of an input arc on a net place, as agent names. A net token can only
// be demanded once per place.
bool demands_covered(const NestedNet& np, const NpMarking& m, const TransitionId& t, const Binding& b,
                     std::vector<std::string>* missing = nullptr) {
  bool ok = true;
  for (const auto& p : np.system.net.preset(t)) {
    const auto demand = eval_arc_expr(np.system.input(p, t), b);
    if (np.system.is_net_place(p)) {
      const auto& tokens = m.net_tokens(p);
      for (const auto& [value, n] : demand) {
        const auto* agent = std::get_if<AgentName>(&value);
        if (!agent || n > 1 || !tokens.count(*agent)) {
          ok = false;
          if (missing) missing->push_back(p.str() + ":" + to_string(value));
        }
      }
    } else if (!m.atoms(p).includes(demand)) {
      ok = false;
      if (missing)
        for (const auto& [value, n] : demand)
          if (m.atoms(p).count(value) < n) missing->push_back(p.str() + ":" + to_string(value));
    }
  }
  return ok;
}

// Fires t with b on the system level; net tokens keep their (current) inner
// markings while moving.
NpMarking fire_system(const NestedNet& np, const NpMarking& m, const TransitionId& t, const Binding& b) {
  NpMarking next = m;
  std::map<AgentName, Marking> moving;
  for (const auto& p : np.system.net.preset(t)) {
    const auto demand = eval_arc_expr(np.system.input(p, t), b);
    if (np.system.is_net_place(p)) {
      for (const auto& [value, n] : demand) {
        const auto& agent = std::get<AgentName>(value);
        moving[agent] = next.take_net_token(p, agent);
      }
    } else {
      next.remove_atoms(p, demand);
    }
  }
  for (const auto& p : np.system.net.postset(t)) {
    const auto produced = eval_arc_expr(np.system.output(t, p), b);
    if (np.system.is_net_place(p)) {
      for (const auto& [value, n] : produced) {
        const auto* agent = std::get_if<AgentName>(&value);
        if (!agent) throw StructuralError("atomic value produced into net place '" + p.str() + "'");
        auto it = moving.find(*agent);
        if (it == moving.end())
          throw StructuralError("transition '" + t.str() + "' would create net token '" + agent->str() + "'");
        for (std::size_t k = 0; k < n; ++k) next.put_net_token(p, *agent, it->second);
      }
    } else {
      next.add_atoms(p, produced);
    }
  }
  return next;
}

std::vector<Binding> candidate_bindings(const NestedNet& np, const NpMarking& m, const TransitionId& t) {
  const auto vars = np.system.variables_of(t);
  std::vector<std::vector<Value>> candidates;
  for (const auto& v : vars) {
    const VarType& type = np.system.type_of(t, v);
    std::optional<std::set<Value>> options;
    for (const auto& p : np.system.net.preset(t)) {
      if (np.system.input(p, t).occurrences(v) == 0) continue;
      std::set<Value> present;
      if (np.system.is_net_place(p)) {
        for (const auto& [agent, inner] : m.net_tokens(p))
          if (value_admitted(np, type, agent)) present.insert(agent);
      } else {
        for (const auto& [value, n] : m.atoms(p))
          if (value_admitted(np, type, value)) present.insert(value);
      }
      if (options) {
        std::set<Value> both;
        std::set_intersection(options->begin(), options->end(), present.begin(), present.end(),
                              std::inserter(both, both.end()));
        options = std::move(both);
      } else {
        options = std::move(present);
      }
    }
    if (!options) {
      // Only read on output arcs: a net variable has nothing to move, a data
      // variable ranges over its whole domain.
      options.emplace();
      if (const auto* d = std::get_if<DomainName>(&type))
        if (auto it = np.domains.find(*d); it != np.domains.end()) *options = it->second.values;
    }
    candidates.emplace_back(options->begin(), options->end());
  }

  std::vector<Binding> out;
  Binding current;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      if (demands_covered(np, m, t, current)) out.push_back(current);
      return;
    }
    for (const auto& value : candidates[i]) {
      current[vars[i]] = value;
      go(i + 1);
    }
    current.erase(vars[i]);
  };
  go(0);
  return out;
}

// Inner transitions of `agent` carrying sync label `label`, enabled now.
std::vector<TransitionId> sync_partners(const NestedNet& np, const NpMarking& m, const AgentName& agent,
                                        const SyncLabel& label) {
  std::vector<TransitionId> out;
  const WorkflowNet& w = np.class_of(agent);
  const Marking& inner = m.inner(agent);
  for (const auto& [t, l] : w.sync)
    if (l == label && is_enabled(w.net, inner, t)) out.push_back(t);
  return out;
}

// Empty string when enabled, otherwise the reason.
std::string why_not_enabled(const NestedNet& np, const NpMarking& m, const Step& s) {
  if (const auto* e = std::get_if<ElementAutonomousStep>(&s)) {
    if (!np.has_agent(e->agent)) return "unknown agent '" + e->agent.str() + "'";
    const WorkflowNet& w = np.class_of(e->agent);
    if (!w.net.has_transition(e->transition)) return "agent has no transition '" + e->transition.str() + "'";
    if (w.sync_of(e->transition)) return "transition '" + e->transition.str() + "' carries a sync label";
    if (!m.locate(e->agent)) return "net token '" + e->agent.str() + "' is absent";
    if (!is_enabled(w.net, m.inner(e->agent), e->transition)) return "inner transition not enabled";
    return {};
  }

  const TransitionId& t = std::visit([](const auto& x) -> const TransitionId& { return x.transition; }, s);
  const Binding& b = std::visit(
      [](const auto& x) -> const Binding& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ElementAutonomousStep>) {
          static const Binding none;
          return none;
        } else {
          return x.binding;
        }
      },
      s);
  if (!np.system.net.has_transition(t)) return "unknown system transition '" + t.str() + "'";
  if (!binding_well_typed(np, t, b)) return "binding is incomplete or ill-typed";
  std::vector<std::string> missing;
  if (!demands_covered(np, m, t, b, &missing)) return "input demand not covered";

  const auto label = np.system.sync_of(t);
  if (std::holds_alternative<SystemAutonomousStep>(s))
    return label ? "transition '" + t.str() + "' carries a sync label" : std::string{};

  const auto& sync = std::get<SynchronizationStep>(s);
  if (!label) return "transition '" + t.str() + "' has no sync label";
  std::set<AgentName> named;
  for (const auto& [agent, inner_t] : sync.participants) {
    if (!named.insert(agent).second) return "agent listed twice";
    const WorkflowNet& w = np.class_of(agent);
    if (!w.net.has_transition(inner_t)) return "agent has no transition '" + inner_t.str() + "'";
    if (w.sync_of(inner_t) != label) return "inner transition '" + inner_t.str() + "' has a different sync label";
    if (!is_enabled(w.net, m.inner(agent), inner_t)) return "inner transition '" + inner_t.str() + "' not enabled";
  }
  if (named != involved_agents(np, t, b)) return "participants differ from the involved net tokens";
  return {};
}

}  // namespace

std::set<AgentName> involved_agents(const NestedNet& np, const TransitionId& t, const Binding& b) {
  std::set<AgentName> out;
  for (const auto& v : np.system.variables_of(t)) {
    if (!std::holds_alternative<NetId>(np.system.type_of(t, v))) continue;
    auto it = b.find(v);
    if (it != b.end())
      if (const auto* agent = std::get_if<AgentName>(&it->second)) out.insert(*agent);
  }
  return out;
}

Multiset<Value> binding_payload(const NestedNet& np, const TransitionId& t, const Binding& b) {
  Multiset<Value> out;
  for (const auto& v : np.system.variables_of(t)) {
    auto it = b.find(v);
    if (it == b.end()) throw BindingError("variable '" + v.str() + "' is not bound");
    out.add(it->second);
  }
  return out;
}

bool system_enabled(const NestedNet& np, const NpMarking& m, const TransitionId& t, const Binding& b) {
  return binding_well_typed(np, t, b) && demands_covered(np, m, t, b);
}

std::vector<Binding> system_bindings_for_payload(const NestedNet& np, const NpMarking& m, const TransitionId& t,
                                                 const Multiset<Value>& payload) {
  auto admits = [&](const VariableId& v, const Value& value) {
    return value_admitted(np, np.system.type_of(t, v), value);
  };
  auto bindings = assign_payload(np.system.variables_of(t), payload, admits);
  std::erase_if(bindings, [&](const Binding& b) { return !demands_covered(np, m, t, b); });
  return bindings;
}

std::vector<Step> enabled_steps(const NestedNet& np, const NpMarking& m) {
  std::vector<Step> steps;
  for (const auto& [p, tokens] : m.net_places())
    for (const auto& [agent, inner] : tokens) {
      const WorkflowNet& w = np.class_of(agent);
      for (const auto& [t, a] : w.activity)
        if (!w.sync.count(t) && is_enabled(w.net, inner, t)) steps.push_back(ElementAutonomousStep{agent, t});
    }

  for (const auto& t : np.system.net.transitions()) {
    const auto label = np.system.sync_of(t);
    for (auto& b : candidate_bindings(np, m, t)) {
      if (!label) {
        steps.push_back(SystemAutonomousStep{t, std::move(b)});
        continue;
      }
      const auto involved = involved_agents(np, t, b);
      std::vector<AgentName> agents(involved.begin(), involved.end());
      std::vector<std::vector<TransitionId>> choices;
      for (const auto& agent : agents) choices.push_back(sync_partners(np, m, agent, *label));

      SynchronizationStep step{t, b, {}};
      std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == agents.size()) {
          steps.push_back(step);
          return;
        }
        for (const auto& inner_t : choices[i]) {
          step.participants.emplace_back(agents[i], inner_t);
          go(i + 1);
          step.participants.pop_back();
        }
      };
      go(0);
    }
  }
  std::sort(steps.begin(), steps.end());
  return steps;
}

bool is_step_enabled(const NestedNet& np, const NpMarking& m, const Step& s) {
  return why_not_enabled(np, m, s).empty();
}

NpMarking apply_step(const NestedNet& np, const NpMarking& m, const Step& s) {
  if (auto reason = why_not_enabled(np, m, s); !reason.empty()) {
    const std::string name = std::visit(
        [](const auto& x) {
          if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ElementAutonomousStep>)
            return x.agent.str() + ":" + x.transition.str();
          else
            return x.transition.str();
        },
        s);
    throw NotEnabledError(name, {reason});
  }
  return apply_enabled_step(np, m, s);
}

NpMarking apply_enabled_step(const NestedNet& np, const NpMarking& m, const Step& s) {
  if (const auto* e = std::get_if<ElementAutonomousStep>(&s)) {
    NpMarking next = m;
    next.set_inner(e->agent, fire(np.class_of(e->agent).net, m.inner(e->agent), e->transition));
    return next;
  }
  if (const auto* a = std::get_if<SystemAutonomousStep>(&s)) return fire_system(np, m, a->transition, a->binding);

  const auto& sync = std::get<SynchronizationStep>(s);
  NpMarking next = m;
  for (const auto& [agent, inner_t] : sync.participants)
    next.set_inner(agent, fire(np.class_of(agent).net, next.inner(agent), inner_t));
  return fire_system(np, next, sync.transition, sync.binding);
}

bool is_run_np(const NestedNet& np, std::span<const Step> steps) {
  NpMarking m = np.initial_marking;
  for (const auto& s : steps) {
    if (!is_step_enabled(np, m, s)) return false;
    m = apply_enabled_step(np, m, s);
  }
  return np.is_final(m);
}

}  // namespace npconf
