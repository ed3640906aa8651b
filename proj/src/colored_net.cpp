#include "npconf/colored_net.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "npconf/binding_search.hpp"
#include "npconf/errors.hpp"

namespace npconf {
namespace {

const Multiset<Value> kEmpty;

}  // namespace

const Multiset<Value>& ColoredMarking::tokens(const PlaceId& p) const {
  auto it = places_.find(p);
  return it == places_.end() ? kEmpty : it->second;
}

void ColoredMarking::add(const PlaceId& p, const Multiset<Value>& values) {
  if (values.empty()) return;
  places_[p] += values;
}

void ColoredMarking::add(const PlaceId& p, const Value& v, std::size_t n) {
  if (n == 0) return;
  places_[p].add(v, n);
}

void ColoredMarking::remove(const PlaceId& p, const Multiset<Value>& values) {
  if (values.empty()) return;
  auto it = places_.find(p);
  if (it == places_.end()) throw MultisetUnderflow("place '" + p.str() + "' holds no tokens");
  it->second -= values;
  if (it->second.empty()) places_.erase(it);
}

std::ostream& operator<<(std::ostream& os, const ColoredMarking& m) {
  os << '[';
  bool first = true;
  for (const auto& [p, tokens] : m.places()) {
    if (!first) os << ", ";
    first = false;
    os << p << ": " << tokens;
  }
  return os << ']';
}

const Domain& ColoredNet::domain_of_place(const PlaceId& p) const {
  auto t = place_type.find(p);
  if (t == place_type.end()) throw StructuralError("place '" + p.str() + "' has no type");
  auto d = domains.find(t->second);
  if (d == domains.end()) throw StructuralError("unknown domain '" + t->second.str() + "'");
  return d->second;
}

const Domain& ColoredNet::domain_of_variable(const TransitionId& t, const VariableId& v) const {
  auto vars = var_type.find(t);
  if (vars == var_type.end() || !vars->second.count(v))
    throw BindingError("variable '" + v.str() + "' is not declared on transition '" + t.str() + "'");
  auto d = domains.find(vars->second.at(v));
  if (d == domains.end()) throw StructuralError("unknown domain '" + vars->second.at(v).str() + "'");
  return d->second;
}

ValidationReport validate_colored_net(const ColoredNet& cn) {
  ValidationReport report;
  for (const auto& p : cn.net.places()) {
    auto it = cn.place_type.find(p);
    if (it == cn.place_type.end())
      report.add("untyped-place", p.str(), "place has no type");
    else if (!cn.domains.count(it->second))
      report.add("unknown-domain", p.str(), "place type '" + it->second.str() + "' is not a declared domain");
  }
  for (const auto& t : cn.net.transitions()) {
    if (!cn.activity.count(t)) report.add("unlabelled-transition", t.str(), "transition has no activity label");
    auto vars = cn.var_type.find(t);
    if (vars == cn.var_type.end()) continue;
    for (const auto& [v, d] : vars->second)
      if (!cn.domains.count(d))
        report.add("unknown-domain", t.str() + "." + v.str(), "variable type '" + d.str() + "' is not a declared domain");
  }

  auto check_arc = [&](const PlaceId& p, const TransitionId& t, const ArcExpr* e, const std::string& subject) {
    if (!e) {
      report.add("missing-expression", subject, "arc has no expression");
      return;
    }
    auto pt = cn.place_type.find(p);
    if (pt == cn.place_type.end() || !cn.domains.count(pt->second)) return;
    const Domain& place_domain = cn.domains.at(pt->second);
    for (const auto& term : e->terms) {
      if (const auto* c = std::get_if<Value>(&term)) {
        if (!place_domain.contains(*c))
          report.add("type-mismatch", subject, "constant " + to_string(*c) + " is not in domain '" + place_domain.name.str() + "'");
        continue;
      }
      const auto& v = std::get<VariableId>(term);
      auto vars = cn.var_type.find(t);
      if (vars == cn.var_type.end() || !vars->second.count(v)) {
        report.add("undeclared-variable", subject, "variable '" + v.str() + "' is not declared");
        continue;
      }
      auto vd = cn.domains.find(vars->second.at(v));
      if (vd == cn.domains.end()) continue;
      for (const auto& value : vd->second.values)
        if (!place_domain.contains(value)) {
          report.add("type-mismatch", subject,
                     "variable '" + v.str() + "' of type '" + vd->first.str() + "' does not fit place type '" +
                         place_domain.name.str() + "'");
          break;
        }
    }
  };
  for (const auto& arc : cn.net.input_arcs()) {
    auto it = cn.input_expr.find(arc);
    check_arc(arc.first, arc.second, it == cn.input_expr.end() ? nullptr : &it->second,
              arc.first.str() + "->" + arc.second.str());
  }
  for (const auto& arc : cn.net.output_arcs()) {
    auto it = cn.output_expr.find(arc);
    check_arc(arc.second, arc.first, it == cn.output_expr.end() ? nullptr : &it->second,
              arc.first.str() + "->" + arc.second.str());
  }

  auto check_marking = [&](const ColoredMarking& m, const std::string& what) {
    for (const auto& [p, tokens] : m.places()) {
      if (!cn.net.has_place(p)) {
        report.add("bad-marking", what, "unknown place '" + p.str() + "'");
        continue;
      }
      auto pt = cn.place_type.find(p);
      if (pt == cn.place_type.end() || !cn.domains.count(pt->second)) continue;
      for (const auto& [value, n] : tokens)
        if (!cn.domains.at(pt->second).contains(value))
          report.add("bad-marking", what, "value " + to_string(value) + " is not in the type of place '" + p.str() + "'");
    }
  };
  check_marking(cn.initial_marking, "initial");
  for (std::size_t i = 0; i < cn.final_markings.size(); ++i)
    check_marking(cn.final_markings[i], "final[" + std::to_string(i) + "]");
  return report;
}

std::vector<VariableId> variables_of(const ColoredNet& cn, const TransitionId& t) {
  std::set<VariableId> vars;
  for (const auto& p : cn.net.preset(t))
    if (auto it = cn.input_expr.find({p, t}); it != cn.input_expr.end()) {
      auto v = it->second.variables();
      vars.insert(v.begin(), v.end());
    }
  for (const auto& p : cn.net.postset(t))
    if (auto it = cn.output_expr.find({t, p}); it != cn.output_expr.end()) {
      auto v = it->second.variables();
      vars.insert(v.begin(), v.end());
    }
  return {vars.begin(), vars.end()};
}

namespace {

const ArcExpr& input_expr(const ColoredNet& cn, const PlaceId& p, const TransitionId& t) {
  auto it = cn.input_expr.find({p, t});
  if (it == cn.input_expr.end()) throw StructuralError("arc " + p.str() + "->" + t.str() + " has no expression");
  return it->second;
}

const ArcExpr& output_expr(const ColoredNet& cn, const TransitionId& t, const PlaceId& p) {
  auto it = cn.output_expr.find({t, p});
  if (it == cn.output_expr.end()) throw StructuralError("arc " + t.str() + "->" + p.str() + " has no expression");
  return it->second;
}

void check_binding(const ColoredNet& cn, const TransitionId& t, const Binding& b) {
  for (const auto& v : variables_of(cn, t)) {
    auto it = b.find(v);
    if (it == b.end()) throw BindingError("variable '" + v.str() + "' of '" + t.str() + "' is not bound");
    if (!cn.domain_of_variable(t, v).contains(it->second))
      throw BindingError("value " + to_string(it->second) + " is outside the domain of '" + v.str() + "'");
  }
}

bool binding_well_typed(const ColoredNet& cn, const TransitionId& t, const Binding& b) {
  for (const auto& v : variables_of(cn, t)) {
    auto it = b.find(v);
    if (it == b.end() || !cn.domain_of_variable(t, v).contains(it->second)) return false;
  }
  return true;
}

bool demands_covered(const ColoredNet& cn, const ColoredMarking& m, const TransitionId& t, const Binding& b) {
  for (const auto& p : cn.net.preset(t))
    if (!m.tokens(p).includes(eval_arc_expr(input_expr(cn, p, t), b))) return false;
  return true;
}

}  // namespace

bool is_enabled(const ColoredNet& cn, const ColoredMarking& m, const TransitionId& t, const Binding& b) {
  return binding_well_typed(cn, t, b) && demands_covered(cn, m, t, b);
}

std::vector<Binding> enabled_bindings(const ColoredNet& cn, const ColoredMarking& m, const TransitionId& t) {
  const auto vars = variables_of(cn, t);

  // A variable read from an input place can only take values present there.
  std::vector<std::vector<Value>> candidates;
  for (const auto& v : vars) {
    const Domain& dom = cn.domain_of_variable(t, v);
    std::set<Value> options(dom.values.begin(), dom.values.end());
    for (const auto& p : cn.net.preset(t)) {
      if (input_expr(cn, p, t).occurrences(v) == 0) continue;
      std::set<Value> present;
      for (const auto& [value, n] : m.tokens(p))
        if (options.count(value)) present.insert(value);
      options = std::move(present);
    }
    candidates.emplace_back(options.begin(), options.end());
  }

  std::vector<Binding> out;
  Binding current;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      if (demands_covered(cn, m, t, current)) out.push_back(current);
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

ColoredMarking fire_colored(const ColoredNet& cn, const ColoredMarking& m, const TransitionId& t, const Binding& b) {
  check_binding(cn, t, b);
  std::vector<std::string> missing;
  for (const auto& p : cn.net.preset(t)) {
    const auto demand = eval_arc_expr(input_expr(cn, p, t), b);
    if (!m.tokens(p).includes(demand)) {
      for (const auto& [value, n] : demand)
        if (m.tokens(p).count(value) < n) missing.push_back(p.str() + ":" + to_string(value));
    }
  }
  if (!missing.empty()) throw NotEnabledError(t.str(), std::move(missing));

  ColoredMarking next = m;
  for (const auto& p : cn.net.preset(t)) next.remove(p, eval_arc_expr(input_expr(cn, p, t), b));
  for (const auto& p : cn.net.postset(t)) next.add(p, eval_arc_expr(output_expr(cn, t, p), b));
  return next;
}

Multiset<Value> binding_payload(const ColoredNet& cn, const TransitionId& t, const Binding& b) {
  Multiset<Value> out;
  for (const auto& v : variables_of(cn, t)) {
    auto it = b.find(v);
    if (it == b.end()) throw BindingError("variable '" + v.str() + "' is not bound");
    out.add(it->second);
  }
  return out;
}

ReplayResult<BindingElement> is_run_colored(const ColoredNet& cn, std::span<const ColoredEvent> run,
                                            const SearchLimits& limits) {
  std::map<TransitionId, std::vector<VariableId>> vars;
  for (const auto& t : cn.net.transitions()) vars[t] = variables_of(cn, t);

  auto expand = [&](const ColoredMarking& m, std::size_t i) {
    std::vector<std::pair<BindingElement, ColoredMarking>> out;
    const ColoredEvent& event = run[i];
    for (const auto& [t, a] : cn.activity) {
      if (a != event.activity) continue;
      auto admits = [&](const VariableId& v, const Value& value) {
        return cn.domain_of_variable(t, v).contains(value);
      };
      for (auto& b : assign_payload(vars.at(t), event.payload, admits)) {
        if (!demands_covered(cn, m, t, b)) continue;
        auto next = fire_colored(cn, m, t, b);
        out.emplace_back(BindingElement{t, std::move(b)}, std::move(next));
      }
    }
    return out;
  };
  auto is_final = [&](const ColoredMarking& m) {
    return std::find(cn.final_markings.begin(), cn.final_markings.end(), m) != cn.final_markings.end();
  };
  return replay_search<ColoredMarking, BindingElement>(cn.initial_marking, run.size(), expand, is_final, limits);
}

}  // namespace npconf
