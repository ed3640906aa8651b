#include "random_models.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "npconf/model_io.hpp"

namespace npconf::test_support {
namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

struct RawTransition {
  std::string id;
  std::set<std::string> pre, post;
};

}  // namespace

WorkflowNet random_workflow_net(std::mt19937_64& rng, const std::string& prefix, std::size_t max_transitions,
                                const std::vector<SyncLabel>& labels, double sync_probability) {
  std::vector<std::string> places{prefix + "i", prefix + "o"};
  std::vector<RawTransition> ts{{prefix + "t0", {prefix + "i"}, {prefix + "o"}}};
  std::size_t next_place = 0, next_transition = 1;
  auto new_place = [&] {
    places.push_back(prefix + "p" + std::to_string(next_place++));
    return places.back();
  };
  auto new_transition = [&] { return prefix + "t" + std::to_string(next_transition++); };

  const std::size_t target = uniform(rng, 2, std::max<std::size_t>(2, max_transitions));
  bool looped = false;
  for (int attempts = 0; ts.size() < target && attempts < 50; ++attempts) {
    const std::size_t k = uniform(rng, 0, ts.size() - 1);
    const std::size_t room = target - ts.size();
    switch (uniform(rng, 0, 3)) {
      case 0: {  // sequence
        const std::string p = new_place();
        RawTransition u{new_transition(), {p}, ts[k].post};
        ts[k].post = {p};
        ts.push_back(u);
        break;
      }
      case 1: {  // choice
        RawTransition c = ts[k];
        c.id = new_transition();
        ts.push_back(c);
        break;
      }
      case 2: {  // parallel
        if (room < 3) break;
        const std::string a1 = new_place(), a2 = new_place(), b1 = new_place(), b2 = new_place();
        RawTransition join{new_transition(), {b1, b2}, ts[k].post};
        ts[k].post = {a1, a2};
        ts.push_back({new_transition(), {a1}, {b1}});
        ts.push_back({new_transition(), {a2}, {b2}});
        ts.push_back(join);
        break;
      }
      default: {  // loop back over a transition away from source and sink
        if (looped || ts[k].pre.count(prefix + "i") || ts[k].post.count(prefix + "o")) break;
        ts.push_back({new_transition(), ts[k].post, ts[k].pre});
        looped = true;
      }
    }
  }

  WorkflowNet w;
  w.source = PlaceId{prefix + "i"};
  w.sink = PlaceId{prefix + "o"};
  std::set<PlaceId> ps;
  for (const auto& p : places) ps.insert(PlaceId{p});
  std::set<TransitionId> tids;
  std::vector<PetriNet::InputArc> in;
  std::vector<PetriNet::OutputArc> out;
  for (const auto& t : ts) {
    tids.insert(TransitionId{t.id});
    for (const auto& p : t.pre) in.emplace_back(PlaceId{p}, TransitionId{t.id});
    for (const auto& p : t.post) out.emplace_back(TransitionId{t.id}, PlaceId{p});
  }
  w.net = PetriNet(ps, tids, in, out);

  // Activities: mostly fresh, sometimes shared, which forces replay to search.
  std::vector<ActivityName> used;
  std::map<ActivityName, std::optional<SyncLabel>> label_of;
  for (const auto& t : ts) {
    ActivityName a;
    if (!used.empty() && chance(rng, 0.2)) {
      a = pick(rng, used);
    } else {
      a = ActivityName{"u" + std::to_string(used.size())};
      used.push_back(a);
      label_of[a] = (!labels.empty() && chance(rng, sync_probability)) ? std::optional(pick(rng, labels)) : std::nullopt;
    }
    w.activity[TransitionId{t.id}] = a;
    if (label_of[a]) w.sync[TransitionId{t.id}] = *label_of[a];
  }
  return w;
}

namespace {

// Reachable markings with every net token at its sink, or nothing when the
// state space exceeds the cap.
std::optional<std::vector<NpMarking>> final_candidates(const NestedNet& np, std::size_t cap) {
  std::set<NpMarking> seen{np.initial_marking};
  std::deque<NpMarking> queue{np.initial_marking};
  std::vector<NpMarking> done;
  while (!queue.empty()) {
    NpMarking m = std::move(queue.front());
    queue.pop_front();
    bool at_sink = true;
    for (const auto& agent : m.agents())
      if (m.inner(agent) != np.class_of(agent).final_marking()) at_sink = false;
    if (at_sink) done.push_back(m);
    for (const auto& s : enabled_steps(np, m)) {
      NpMarking next = apply_enabled_step(np, m, s);
      if (seen.insert(next).second) {
        if (seen.size() > cap) return std::nullopt;
        queue.push_back(std::move(next));
      }
    }
  }
  return done;
}

}  // namespace

std::optional<NestedNet> try_random_model(std::mt19937_64& rng, const RandomModelConfig& cfg) {
  NestedNet np;
  const std::vector<SyncLabel> labels{SyncLabel{"L0"}, SyncLabel{"L1"}, SyncLabel{"L2"}};

  const std::size_t n_classes = uniform(rng, 1, cfg.max_classes);
  std::vector<NetId> classes;
  for (std::size_t c = 0; c < n_classes; ++c) {
    NetId id{"E" + std::to_string(c)};
    classes.push_back(id);
    np.elements[id] = random_workflow_net(rng, "e" + std::to_string(c) + "_", cfg.max_element_transitions, labels,
                                          cfg.sync_probability);
  }
  const std::size_t n_agents = uniform(rng, 1, cfg.max_agents);
  for (std::size_t a = 0; a < n_agents; ++a)
    np.agents[AgentName{"r" + std::to_string(a + 1)}] = a < classes.size() ? classes[a] : pick(rng, classes);

  const bool with_data = chance(rng, cfg.data_probability);
  if (with_data) {
    Domain d{DomainName{"dom"}, {}};
    d.values = {DataValue{d.name, "v0"}, DataValue{d.name, "v1"}};
    np.domains[d.name] = d;
  }

  // System places. Every net place admits the first class so agents can move.
  SystemNet& sn = np.system;
  std::vector<PlaceId> net_places, atom_places;
  const std::size_t n_net_places = uniform(rng, 2, 4);
  for (std::size_t i = 0; i < n_net_places; ++i) {
    PlaceId p{"s" + std::to_string(i)};
    std::set<NetId> type;
    for (const auto& c : classes)
      if (i == 0 || chance(rng, 0.8)) type.insert(c);
    if (type.empty()) type.insert(classes.front());
    sn.place_type[p] = type;
    net_places.push_back(p);
  }
  if (with_data) {
    const std::size_t n_atom = uniform(rng, 1, 2);
    for (std::size_t i = 0; i < n_atom; ++i) {
      PlaceId p{"d" + std::to_string(i)};
      sn.place_type[p] = DomainName{"dom"};
      atom_places.push_back(p);
    }
  }
  auto places_for = [&](const NetId& cls) {
    std::vector<PlaceId> out;
    for (const auto& p : net_places)
      if (std::get<std::set<NetId>>(sn.place_type.at(p)).count(cls)) out.push_back(p);
    return out;
  };

  // Sync labels some class needs, each paired with that class.
  std::vector<std::pair<NetId, SyncLabel>> needed;
  for (const auto& c : classes) {
    std::set<SyncLabel> ls;
    for (const auto& [t, l] : np.elements.at(c).sync) ls.insert(l);
    for (const auto& l : ls) needed.emplace_back(c, l);
  }
  if (needed.size() > cfg.max_system_transitions) return std::nullopt;

  std::set<PlaceId> all_places(net_places.begin(), net_places.end());
  all_places.insert(atom_places.begin(), atom_places.end());
  std::set<TransitionId> transitions;
  std::vector<PetriNet::InputArc> inputs;
  std::vector<PetriNet::OutputArc> outputs;
  std::map<PetriNet::InputArc, std::vector<Atom>> in_terms;
  std::map<PetriNet::OutputArc, std::vector<Atom>> out_terms;
  std::vector<std::pair<std::optional<SyncLabel>, ActivityName>> activities;

  const std::size_t n_transitions = uniform(rng, std::max<std::size_t>(1, needed.size()), cfg.max_system_transitions);
  for (std::size_t k = 0; k < n_transitions; ++k) {
    const TransitionId t{"x" + std::to_string(k)};
    transitions.insert(t);
    std::optional<SyncLabel> label;
    std::vector<NetId> var_classes;
    if (k < needed.size()) {
      label = needed[k].second;
      var_classes.push_back(needed[k].first);
      if (chance(rng, 0.25)) var_classes.push_back(pick(rng, classes));
    } else {
      const std::size_t n_vars = with_data && chance(rng, 0.1) ? 0 : (chance(rng, 0.3) ? 2 : 1);
      for (std::size_t v = 0; v < n_vars; ++v) var_classes.push_back(pick(rng, classes));
      if (chance(rng, cfg.sync_probability * 0.5)) label = pick(rng, labels);
    }
    if (label) sn.sync[t] = *label;

    // Label-deterministic activity names: reuse only among equal labels.
    ActivityName activity{"a" + std::to_string(k)};
    for (const auto& [l, a] : activities)
      if (l == label && chance(rng, 0.15)) activity = a;
    activities.emplace_back(label, activity);
    sn.activity[t] = activity;

    auto& vars = sn.variables[t];
    for (std::size_t v = 0; v < var_classes.size(); ++v) {
      const VariableId x{"x" + std::to_string(v)};
      vars[x] = var_classes[v];
      const auto candidates = places_for(var_classes[v]);
      const PlaceId from = pick(rng, candidates), to = pick(rng, candidates);
      in_terms[{from, t}].push_back(x);
      out_terms[{t, to}].push_back(x);
    }
    if (with_data && (var_classes.empty() || chance(rng, 0.4))) {
      const VariableId s{"y"};
      vars[s] = DomainName{"dom"};
      const PlaceId from = pick(rng, atom_places), to = pick(rng, atom_places);
      in_terms[{from, t}].push_back(s);
      // at most one token back out, so atom places stay bounded
      const std::size_t fate = uniform(rng, 0, 9);
      if (fate < 7)
        out_terms[{t, to}].push_back(s);
      else if (fate < 9)
        out_terms[{t, to}].push_back(Value{DataValue{DomainName{"dom"}, "v0"}});
    }
  }
  for (const auto& [arc, terms] : in_terms) {
    inputs.push_back(arc);
    sn.input_expr[arc] = ArcExpr{terms};
  }
  for (const auto& [arc, terms] : out_terms) {
    outputs.push_back(arc);
    sn.output_expr[arc] = ArcExpr{terms};
  }
  sn.net = PetriNet(all_places, transitions, inputs, outputs);

  for (const auto& [agent, cls] : np.agents) {
    const auto candidates = places_for(cls);
    np.initial_marking.put_net_token(pick(rng, candidates), agent, np.elements.at(cls).initial_marking());
  }
  for (const auto& p : atom_places)
    for (std::size_t n = uniform(rng, 0, 2); n > 0; --n)
      np.initial_marking.add_atom(p, DataValue{DomainName{"dom"}, n % 2 ? "v0" : "v1"});

  auto finals = final_candidates(np, cfg.max_states);
  if (!finals || finals->empty()) return std::nullopt;
  std::shuffle(finals->begin(), finals->end(), rng);
  finals->resize(std::min<std::size_t>(finals->size(), chance(rng, 0.5) ? 1 : 2));
  np.final_markings = std::move(*finals);

  ModelDocument doc{np, {}};
  if (!validate_model(doc).ok() || !check_label_determinism(np).ok()) return std::nullopt;
  return np;
}

NestedNet random_model(std::uint64_t seed, const RandomModelConfig& cfg) {
  std::mt19937_64 rng(seed);
  while (true)
    if (auto np = try_random_model(rng, cfg)) return *np;
}

ColoredNet random_colored_net(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ColoredNet cn;
  std::vector<DomainName> domains{DomainName{"A"}, DomainName{"B"}};
  cn.domains[domains[0]] = Domain{domains[0], {DataValue{domains[0], "a0"}, DataValue{domains[0], "a1"}}};
  cn.domains[domains[1]] =
      Domain{domains[1], {DataValue{domains[1], "b0"}, DataValue{domains[1], "b1"}, DataValue{domains[1], "b2"}}};

  const std::size_t n_places = uniform(rng, 2, 4);
  std::set<PlaceId> places;
  std::vector<PlaceId> place_list;
  for (std::size_t i = 0; i < n_places; ++i) {
    PlaceId p{"c" + std::to_string(i)};
    places.insert(p);
    place_list.push_back(p);
    cn.place_type[p] = i == 0 ? domains[0] : pick(rng, domains);
  }
  auto places_of = [&](const DomainName& d) {
    std::vector<PlaceId> out;
    for (const auto& p : place_list)
      if (cn.place_type.at(p) == d) out.push_back(p);
    return out;
  };

  std::set<TransitionId> transitions;
  std::map<PetriNet::InputArc, std::vector<Atom>> in_terms;
  std::map<PetriNet::OutputArc, std::vector<Atom>> out_terms;
  const std::size_t n_transitions = uniform(rng, 2, 4);
  for (std::size_t k = 0; k < n_transitions; ++k) {
    const TransitionId t{"ct" + std::to_string(k)};
    transitions.insert(t);
    cn.activity[t] = ActivityName{"c" + std::to_string(chance(rng, 0.25) && k > 0 ? k - 1 : k)};
    const std::size_t n_vars = uniform(rng, 1, 2);
    for (std::size_t v = 0; v < n_vars; ++v) {
      const VariableId x{"v" + std::to_string(v)};
      const DomainName d = pick(rng, domains);
      const auto ps = places_of(d);
      if (ps.empty()) continue;
      cn.var_type[t][x] = d;
      in_terms[{pick(rng, ps), t}].push_back(x);
      if (chance(rng, 0.85)) out_terms[{t, pick(rng, ps)}].push_back(x);
    }
    if (chance(rng, 0.3)) {
      const PlaceId p = pick(rng, place_list);
      const auto& values = cn.domains.at(cn.place_type.at(p)).values;
      out_terms[{t, p}].push_back(*values.begin());
    }
  }
  std::vector<PetriNet::InputArc> inputs;
  std::vector<PetriNet::OutputArc> outputs;
  for (const auto& [arc, terms] : in_terms) {
    inputs.push_back(arc);
    cn.input_expr[arc] = ArcExpr{terms};
  }
  for (const auto& [arc, terms] : out_terms) {
    outputs.push_back(arc);
    cn.output_expr[arc] = ArcExpr{terms};
  }
  cn.net = PetriNet(places, transitions, inputs, outputs);

  for (const auto& p : place_list) {
    const auto& values = cn.domains.at(cn.place_type.at(p)).values;
    std::vector<Value> vs(values.begin(), values.end());
    for (std::size_t n = uniform(rng, 0, 2); n > 0; --n) cn.initial_marking.add(p, pick(rng, vs));
  }

  // Final markings: one or two reachable markings a few steps away.
  std::vector<ColoredMarking> reachable{cn.initial_marking};
  std::set<ColoredMarking> seen{cn.initial_marking};
  std::deque<std::pair<ColoredMarking, std::size_t>> queue{{cn.initial_marking, 0}};
  while (!queue.empty() && seen.size() < 2000) {
    auto [m, depth] = queue.front();
    queue.pop_front();
    if (depth == 4) continue;
    for (const auto& t : transitions)
      for (const auto& b : enabled_bindings(cn, m, t)) {
        auto next = fire_colored(cn, m, t, b);
        if (seen.insert(next).second) {
          reachable.push_back(next);
          queue.emplace_back(next, depth + 1);
        }
      }
  }
  cn.final_markings.push_back(pick(rng, reachable));
  if (chance(rng, 0.5)) {
    auto other = pick(rng, reachable);
    if (other != cn.final_markings.front()) cn.final_markings.push_back(other);
  }
  return cn;
}

}  // namespace npconf::test_support
