#include "npconf/loggen.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "npconf/errors.hpp"
#include "parallel.hpp"

namespace npconf {

Event event_of(const NestedNet& np, const Step& s) {
  if (const auto* e = std::get_if<ElementAutonomousStep>(&s))
    return AgentEvent{np.class_of(e->agent).activity_of(e->transition), e->agent};

  auto data_of = [&](const TransitionId& t, const Binding& b) {
    Multiset<DataValue> data;
    for (const auto& [value, n] : binding_payload(np, t, b))
      if (const auto* d = std::get_if<DataValue>(&value)) data.add(*d, n);
    return data;
  };
  if (const auto* a = std::get_if<SystemAutonomousStep>(&s))
    return SystemEvent{np.system.activity.at(a->transition), involved_agents(np, a->transition, a->binding),
                       data_of(a->transition, a->binding)};

  const auto& y = std::get<SynchronizationStep>(s);
  std::vector<Participant> participants;
  for (const auto& [agent, t] : y.participants)
    participants.push_back({np.class_of(agent).activity_of(t), agent});
  return make_sync_event(np.system.activity.at(y.transition), std::move(participants), data_of(y.transition, y.binding));
}

std::uint64_t trace_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::optional<SimulatedRun> simulate_run(const NestedNet& np, std::uint64_t seed, std::size_t max_steps,
                                         std::size_t max_expansions) {
  std::mt19937_64 rng(seed);
  // Largest remaining budget with which a marking is known to be a dead end.
  std::map<NpMarking, std::size_t> dead;
  std::vector<Step> path;
  std::size_t expansions = 0;

  struct Frame {
    NpMarking marking;
    std::vector<Step> options;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;

  auto push = [&](NpMarking m) {
    ++expansions;
    Frame f{std::move(m), {}, 0};
    if (!np.is_final(f.marking) && path.size() < max_steps) {
      f.options = enabled_steps(np, f.marking);
      std::shuffle(f.options.begin(), f.options.end(), rng);
    }
    stack.push_back(std::move(f));
  };

  push(np.initial_marking);
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (np.is_final(top.marking)) {
      SimulatedRun run;
      run.steps = path;
      for (const auto& s : path) run.trace.push_back(event_of(np, s));
      return run;
    }
    const std::size_t budget = max_steps - path.size();
    if (top.next < top.options.size()) {
      if (expansions >= max_expansions) return std::nullopt;
      const Step s = top.options[top.next++];
      NpMarking next = apply_enabled_step(np, top.marking, s);
      auto it = dead.find(next);
      if (it != dead.end() && it->second >= budget - 1) continue;
      path.push_back(s);
      push(std::move(next));
      continue;
    }
    auto& known = dead[top.marking];
    known = std::max(known, budget);
    stack.pop_back();
    if (!path.empty()) path.pop_back();
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kUnreachable = static_cast<std::size_t>(-1);

// Whole reachability graph with distances to the nearest final marking.
// Final markings are not expanded since runs stop there.
struct StateGraph {
  std::vector<NpMarking> states;
  std::vector<std::vector<std::pair<Step, std::size_t>>> successors;
  std::vector<std::size_t> distance;

  static std::optional<StateGraph> explore(const NestedNet& np, std::size_t cap) {
    StateGraph g;
    std::map<NpMarking, std::size_t> index;
    auto intern = [&](NpMarking m) {
      auto [it, fresh] = index.try_emplace(m, g.states.size());
      if (fresh) {
        g.states.push_back(std::move(m));
        g.successors.emplace_back();
      }
      return it->second;
    };
    intern(np.initial_marking);
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      if (g.states.size() > cap) return std::nullopt;
      if (np.is_final(g.states[i])) continue;
      for (auto& s : enabled_steps(np, g.states[i])) {
        NpMarking next = apply_enabled_step(np, g.states[i], s);
        const std::size_t j = intern(std::move(next));
        g.successors[i].emplace_back(std::move(s), j);
      }
    }

    std::vector<std::vector<std::size_t>> predecessors(g.states.size());
    for (std::size_t i = 0; i < g.states.size(); ++i)
      for (const auto& [s, j] : g.successors[i]) predecessors[j].push_back(i);
    g.distance.assign(g.states.size(), kUnreachable);
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < g.states.size(); ++i)
      if (np.is_final(g.states[i])) {
        g.distance[i] = 0;
        queue.push_back(i);
      }
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (std::size_t i : predecessors[queue[q]])
        if (g.distance[i] == kUnreachable) {
          g.distance[i] = g.distance[queue[q]] + 1;
          queue.push_back(i);
        }
    return g;
  }

  // Uniform choice among steps that still leave a final marking within reach.
  std::optional<SimulatedRun> walk(const NestedNet& np, std::uint64_t seed, std::size_t max_steps) const {
    if (distance[0] > max_steps) return std::nullopt;
    std::mt19937_64 rng(seed);
    SimulatedRun run;
    std::size_t at = 0;
    std::vector<const std::pair<Step, std::size_t>*> viable;
    while (distance[at] != 0) {
      const std::size_t left = max_steps - run.steps.size();
      viable.clear();
      for (const auto& edge : successors[at])
        if (distance[edge.second] < left) viable.push_back(&edge);
      const auto* edge = viable[std::uniform_int_distribution<std::size_t>(0, viable.size() - 1)(rng)];
      run.steps.push_back(edge->first);
      run.trace.push_back(event_of(np, edge->first));
      at = edge->second;
    }
    return run;
  }
};

}  // namespace

EventLog generate_log(const NestedNet& np, const SimulationConfig& cfg) {
  std::vector<std::optional<SimulatedRun>> runs(cfg.trace_count);
  std::optional<StateGraph> graph;
  if (cfg.guide_states > 0) graph = StateGraph::explore(np, cfg.guide_states);
  detail::parallel_for(cfg.trace_count, cfg.workers, [&](std::size_t i) {
    const std::uint64_t seed = trace_seed(cfg.seed, i);
    runs[i] = graph ? graph->walk(np, seed, cfg.max_steps) : simulate_run(np, seed, cfg.max_steps, cfg.max_expansions);
  });
  EventLog log;
  log.header = header_for(np);
  std::size_t failed = 0;
  for (auto& run : runs) {
    if (!run)
      ++failed;
    else
      log.traces.add(std::move(run->trace));
  }
  if (failed)
    throw GenerationError("no run to a final marking found for " + std::to_string(failed) + " of " +
                              std::to_string(cfg.trace_count) + " traces",
                          failed, cfg.trace_count);
  return log;
}

std::string_view to_string(NoiseOp op) noexcept {
  switch (op) {
    case NoiseOp::swap: return "swap";
    case NoiseOp::drop: return "drop";
    case NoiseOp::relabel: return "relabel";
    case NoiseOp::retarget: return "retarget";
  }
  return "?";
}

NoiseSpec& NoiseSpec::vocabulary_of(const NestedNet& np) {
  std::set<ActivityName> acts;
  for (const auto& [t, a] : np.system.activity) acts.insert(a);
  for (const auto& [id, w] : np.elements)
    for (const auto& [t, a] : w.activity) acts.insert(a);
  activities.assign(acts.begin(), acts.end());
  agents.clear();
  for (const auto& [agent, cls] : np.agents) agents.push_back(agent);
  return *this;
}

std::vector<Trace> expand_instances(const EventLog& log) {
  std::vector<Trace> out;
  for (const auto& [trace, n] : log.traces) out.insert(out.end(), n, trace);
  return out;
}

namespace {

ActivityName& activity_ref(Event& e) {
  return std::visit([](auto& x) -> ActivityName& { return x.activity; }, e);
}

std::vector<AgentName> agents_in(const Event& e) {
  const auto s = agents_of(e);
  return {s.begin(), s.end()};
}

void retarget(Event& e, const AgentName& from, const AgentName& to) {
  if (auto* a = std::get_if<AgentEvent>(&e)) {
    a->agent = to;
  } else if (auto* s = std::get_if<SystemEvent>(&e)) {
    s->involved.erase(from);
    s->involved.insert(to);
  } else {
    auto& y = std::get<SyncEvent>(e);
    auto participants = y.participants;
    for (auto& p : participants)
      if (p.agent == from) p.agent = to;
    y = make_sync_event(y.activity, std::move(participants), y.data);
  }
}

}  // namespace

void apply_change(Trace& trace, const Change& c) {
  if (c.position >= trace.size()) throw std::out_of_range("change position outside the trace");
  switch (c.op) {
    case NoiseOp::swap:
      if (c.position + 1 >= trace.size()) throw std::out_of_range("swap position outside the trace");
      std::swap(trace[c.position], trace[c.position + 1]);
      break;
    case NoiseOp::drop:
      trace.erase(trace.begin() + static_cast<std::ptrdiff_t>(c.position));
      break;
    case NoiseOp::relabel:
      activity_ref(trace[c.position]) = ActivityName{c.to};
      break;
    case NoiseOp::retarget:
      retarget(trace[c.position], AgentName{c.from}, AgentName{c.to});
      break;
  }
}

PerturbedLog perturb_log(const EventLog& log, const NoiseSpec& spec) {
  for (double p : {spec.swap, spec.drop, spec.relabel, spec.retarget})
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise probabilities must lie in [0, 1]");

  PerturbedLog out;
  out.log.header = log.header;
  auto instances = expand_instances(log);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    Trace& trace = instances[k];
    std::mt19937_64 rng(trace_seed(spec.seed, k));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto record = [&](Change c) {
      c.instance = k;
      apply_change(trace, c);
      out.manifest.push_back(std::move(c));
    };

    // Every coin is drawn even when the op cannot apply, so one op's outcome
    // does not shift the random stream of the others.
    if (coin(rng) < spec.swap && trace.size() >= 2) record({k, NoiseOp::swap, pick(trace.size() - 1), {}, {}});
    if (coin(rng) < spec.drop && !trace.empty()) record({k, NoiseOp::drop, pick(trace.size()), {}, {}});
    if (coin(rng) < spec.relabel && !trace.empty() && !spec.activities.empty()) {
      const std::size_t pos = pick(trace.size());
      const std::string from = activity_ref(trace[pos]).str();
      std::vector<ActivityName> others;
      for (const auto& a : spec.activities)
        if (a.str() != from) others.push_back(a);
      if (!others.empty()) record({k, NoiseOp::relabel, pos, from, others[pick(others.size())].str()});
    }
    if (coin(rng) < spec.retarget && !trace.empty() && !spec.agents.empty()) {
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < trace.size(); ++i)
        if (!agents_of(trace[i]).empty()) candidates.push_back(i);
      if (!candidates.empty()) {
        const std::size_t pos = candidates[pick(candidates.size())];
        const auto present = agents_in(trace[pos]);
        const AgentName from = present[pick(present.size())];
        std::vector<AgentName> others;
        for (const auto& a : spec.agents)
          if (std::find(present.begin(), present.end(), a) == present.end()) others.push_back(a);
        if (!others.empty()) record({k, NoiseOp::retarget, pos, from.str(), others[pick(others.size())].str()});
      }
    }
  }
  for (auto& t : instances) out.log.traces.add(std::move(t));
  return out;
}

}  // namespace npconf
