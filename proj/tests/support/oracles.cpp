#include "oracles.hpp"

#include <deque>
#include <functional>
#include <map>

namespace npconf::test_support {
namespace {

using Counts = std::map<std::string, int>;

struct RawNet {
  std::map<std::string, std::vector<std::string>> pre, post;
};

RawNet raw(const PetriNet& net) {
  RawNet r;
  for (const auto& t : net.transitions()) {
    r.pre[t.str()];
    r.post[t.str()];
  }
  for (const auto& [p, t] : net.input_arcs()) r.pre[t.str()].push_back(p.str());
  for (const auto& [t, p] : net.output_arcs()) r.post[t.str()].push_back(p.str());
  return r;
}

bool fire_raw(const RawNet& n, const std::string& t, Counts& m) {
  for (const auto& p : n.pre.at(t))
    if (m[p] < 1) return false;
  for (const auto& p : n.pre.at(t))
    if (--m[p] == 0) m.erase(p);
  for (const auto& p : n.post.at(t)) ++m[p];
  return true;
}

}  // namespace

std::set<Word> wf_language(const WorkflowNet& w, std::size_t max_len) {
  const RawNet n = raw(w.net);
  const Counts final_marking{{w.sink.str(), 1}};
  std::set<Word> out;
  Word word;
  std::function<void(const Counts&)> go = [&](const Counts& m) {
    if (m == final_marking) out.insert(word);
    if (word.size() == max_len) return;
    for (const auto& [t, pre] : n.pre) {
      Counts next = m;
      if (!fire_raw(n, t, next)) continue;
      word.push_back(w.activity.at(TransitionId{t}).str());
      go(next);
      word.pop_back();
    }
  };
  go(Counts{{w.source.str(), 1}});
  return out;
}

std::size_t wf_state_count(const WorkflowNet& w, std::size_t cap) {
  const RawNet n = raw(w.net);
  std::set<Counts> seen{Counts{{w.source.str(), 1}}};
  std::deque<Counts> queue{*seen.begin()};
  while (!queue.empty() && seen.size() < cap) {
    Counts m = queue.front();
    queue.pop_front();
    for (const auto& [t, pre] : n.pre) {
      Counts next = m;
      if (fire_raw(n, t, next) && seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen.size();
}

namespace {

using ValueCounts = std::map<std::pair<std::string, Value>, int>;

ValueCounts counts_of(const ColoredMarking& m) {
  ValueCounts out;
  for (const auto& [p, ms] : m.places())
    for (const auto& [v, n] : ms) out[{p.str(), v}] += static_cast<int>(n);
  return out;
}

Value term_value(const Atom& a, const Binding& b) {
  if (const auto* v = std::get_if<VariableId>(&a)) return b.at(*v);
  return std::get<Value>(a);
}

}  // namespace

std::set<std::vector<ColoredEvent>> colored_language(const ColoredNet& cn, std::size_t max_len) {
  // Every binding of every transition, over the declared variable domains.
  struct Element {
    TransitionId t;
    Binding b;
    Multiset<Value> payload;
  };
  std::vector<Element> elements;
  for (const auto& t : cn.net.transitions()) {
    std::set<VariableId> vars;
    for (const auto& [arc, e] : cn.input_expr)
      if (arc.second == t)
        for (const auto& a : e.terms)
          if (const auto* v = std::get_if<VariableId>(&a)) vars.insert(*v);
    for (const auto& [arc, e] : cn.output_expr)
      if (arc.first == t)
        for (const auto& a : e.terms)
          if (const auto* v = std::get_if<VariableId>(&a)) vars.insert(*v);
    std::vector<VariableId> vs(vars.begin(), vars.end());
    Binding b;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == vs.size()) {
        Multiset<Value> payload;
        for (const auto& [v, value] : b) payload.add(value);
        elements.push_back({t, b, payload});
        return;
      }
      for (const auto& value : cn.domains.at(cn.var_type.at(t).at(vs[i])).values) {
        b[vs[i]] = value;
        go(i + 1);
      }
      b.erase(vs[i]);
    };
    go(0);
  }

  std::set<ValueCounts> finals;
  for (const auto& m : cn.final_markings) finals.insert(counts_of(m));

  std::set<std::vector<ColoredEvent>> out;
  std::vector<ColoredEvent> word;
  std::function<void(const ValueCounts&)> go = [&](const ValueCounts& m) {
    if (finals.count(m)) out.insert(word);
    if (word.size() == max_len) return;
    for (const auto& e : elements) {
      ValueCounts next = m;
      bool ok = true;
      for (const auto& [arc, expr] : cn.input_expr) {
        if (arc.second != e.t) continue;
        for (const auto& a : expr.terms) {
          auto key = std::make_pair(arc.first.str(), term_value(a, e.b));
          if (--next[key] < 0) ok = false;
          if (next[key] == 0) next.erase(key);
        }
      }
      if (!ok) continue;
      for (const auto& [arc, expr] : cn.output_expr) {
        if (arc.first != e.t) continue;
        for (const auto& a : expr.terms) ++next[{arc.second.str(), term_value(a, e.b)}];
      }
      word.push_back({cn.activity.at(e.t), e.payload});
      go(next);
      word.pop_back();
    }
  };
  go(counts_of(cn.initial_marking));
  return out;
}

std::set<Step> brute_force_steps(const NestedNet& np, const NpMarking& m) {
  std::set<Step> out;
  auto inner_enabled = [&](const AgentName& agent, const TransitionId& t) {
    const auto& w = np.class_of(agent);
    const Marking& inner = m.inner(agent);
    for (const auto& [p, tt] : w.net.input_arcs())
      if (tt == t && inner.count(p) == 0) return false;
    return true;
  };

  for (const auto& agent : m.agents()) {
    const auto& w = np.class_of(agent);
    for (const auto& t : w.net.transitions())
      if (!w.sync.count(t) && inner_enabled(agent, t)) out.insert(ElementAutonomousStep{agent, t});
  }

  const SystemNet& sn = np.system;
  for (const auto& t : sn.net.transitions()) {
    const auto& vars = sn.variables.count(t) ? sn.variables.at(t) : std::map<VariableId, VarType>{};
    std::set<VariableId> used;
    for (const auto& [arc, e] : sn.input_expr)
      if (arc.second == t)
        for (const auto& v : e.variables()) used.insert(v);
    for (const auto& [arc, e] : sn.output_expr)
      if (arc.first == t)
        for (const auto& v : e.variables()) used.insert(v);
    std::vector<VariableId> vs(used.begin(), used.end());

    Binding b;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == vs.size()) {
        // Demand check with agent names counted per place.
        std::map<std::pair<std::string, Value>, int> need;
        for (const auto& [arc, e] : sn.input_expr)
          if (arc.second == t)
            for (const auto& a : e.terms) ++need[{arc.first.str(), term_value(a, b)}];
        for (const auto& [key, n] : need) {
          const PlaceId p{key.first};
          int have = 0;
          if (const auto* agent = std::get_if<AgentName>(&key.second))
            have = m.net_tokens(p).count(*agent) ? 1 : 0;
          else
            have = static_cast<int>(m.atoms(p).count(key.second));
          if (have < n) return;
        }
        std::set<AgentName> involved;
        for (const auto& [v, value] : b)
          if (std::holds_alternative<NetId>(vars.at(v))) involved.insert(std::get<AgentName>(value));
        auto label = sn.sync.find(t);
        if (label == sn.sync.end()) {
          out.insert(SystemAutonomousStep{t, b});
          return;
        }
        std::vector<AgentName> agents(involved.begin(), involved.end());
        std::vector<std::pair<AgentName, TransitionId>> chosen;
        std::function<void(std::size_t)> pick = [&](std::size_t k) {
          if (k == agents.size()) {
            out.insert(SynchronizationStep{t, b, chosen});
            return;
          }
          const auto& w = np.class_of(agents[k]);
          for (const auto& [ti, l] : w.sync) {
            if (l != label->second || !inner_enabled(agents[k], ti)) continue;
            chosen.emplace_back(agents[k], ti);
            pick(k + 1);
            chosen.pop_back();
          }
        };
        pick(0);
        return;
      }
      const VarType& type = vars.at(vs[i]);
      std::vector<Value> universe;
      if (const auto* cls = std::get_if<NetId>(&type)) {
        for (const auto& [agent, c] : np.agents)
          if (c == *cls) universe.push_back(agent);
      } else {
        const auto& d = np.domains.at(std::get<DomainName>(type));
        universe.assign(d.values.begin(), d.values.end());
      }
      for (const auto& value : universe) {
        b[vs[i]] = value;
        go(i + 1);
      }
      b.erase(vs[i]);
    };
    go(0);
  }
  return out;
}

}  // namespace npconf::test_support
