#include "npconf/conformance.hpp"

#include <functional>
#include <set>

#include "npconf/errors.hpp"
#include "parallel.hpp"

namespace npconf {
namespace {

using detail::parallel_for;

template <class Move>
TraceVerdict to_verdict(ReplayResult<Move> r) {
  TraceVerdict v;
  v.verdict = r.verdict;
  v.visited = r.visited;
  if (r.verdict == Verdict::does_not_fit) v.failure_position = r.longest_prefix;
  if (r.verdict == Verdict::fits) v.witness = std::move(r.witness);
  return v;
}

Multiset<Value> payload_of(const std::set<AgentName>& agents, const Multiset<DataValue>& data) {
  Multiset<Value> out;
  for (const auto& r : agents) out.add(r);
  for (const auto& [d, n] : data) out.add(d, n);
  return out;
}

using Successors = std::vector<std::pair<Step, NpMarking>>;

void expand_agent(const NestedNet& np, const NpMarking& m, const AgentEvent& e, Successors& out) {
  if (!np.has_agent(e.agent) || !m.locate(e.agent)) return;
  const WorkflowNet& w = np.class_of(e.agent);
  const Marking& inner = m.inner(e.agent);
  for (const auto& [t, a] : w.activity) {
    if (a != e.activity || w.sync.count(t) || !is_enabled(w.net, inner, t)) continue;
    Step s = ElementAutonomousStep{e.agent, t};
    out.emplace_back(s, apply_enabled_step(np, m, s));
  }
}

void expand_system(const NestedNet& np, const NpMarking& m, const SystemEvent& e, Successors& out) {
  const auto payload = payload_of(e.involved, e.data);
  for (const auto& [t, a] : np.system.activity) {
    if (a != e.activity || np.system.sync.count(t)) continue;
    for (auto& b : system_bindings_for_payload(np, m, t, payload)) {
      Step s = SystemAutonomousStep{t, std::move(b)};
      out.emplace_back(s, apply_enabled_step(np, m, s));
    }
  }
}

void expand_sync(const NestedNet& np, const NpMarking& m, const SyncEvent& e, Successors& out) {
  std::set<AgentName> agents;
  for (const auto& p : e.participants) {
    if (!np.has_agent(p.agent) || !m.locate(p.agent)) return;
    agents.insert(p.agent);
  }
  if (agents.size() != e.participants.size()) return;
  const auto payload = payload_of(agents, e.data);

  for (const auto& [t, a] : np.system.activity) {
    if (a != e.activity) continue;
    const auto label = np.system.sync_of(t);
    if (!label) continue;

    // Inner transitions each participant could fire for this label.
    std::vector<std::vector<TransitionId>> choices;
    bool possible = true;
    for (const auto& p : e.participants) {
      const WorkflowNet& w = np.class_of(p.agent);
      const Marking& inner = m.inner(p.agent);
      auto& options = choices.emplace_back();
      for (const auto& [ti, act] : w.activity)
        if (act == p.activity && w.sync_of(ti) == label && is_enabled(w.net, inner, ti)) options.push_back(ti);
      if (options.empty()) {
        possible = false;
        break;
      }
    }
    if (!possible) continue;

    for (const auto& b : system_bindings_for_payload(np, m, t, payload)) {
      if (involved_agents(np, t, b) != agents) continue;
      SynchronizationStep step{t, b, {}};
      std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == choices.size()) {
          Step s = step;
          out.emplace_back(s, apply_step(np, m, s));
          return;
        }
        for (const auto& ti : choices[i]) {
          step.participants.emplace_back(e.participants[i].agent, ti);
          go(i + 1);
          step.participants.pop_back();
        }
      };
      go(0);
    }
  }
}

}  // namespace

std::map<AgentTrace, TraceVerdict> fits_agent(const Multiset<AgentTrace>& log, const WorkflowNet& w,
                                              const FitnessOracleConfig& cfg) {
  std::vector<const AgentTrace*> traces;
  for (const auto& [t, n] : log) traces.push_back(&t);
  std::vector<TraceVerdict> verdicts(traces.size());
  parallel_for(traces.size(), cfg.workers,
               [&](std::size_t i) { verdicts[i] = to_verdict(is_run_wf(w, *traces[i], cfg.limits())); });
  std::map<AgentTrace, TraceVerdict> out;
  for (std::size_t i = 0; i < traces.size(); ++i) out.emplace(*traces[i], std::move(verdicts[i]));
  return out;
}

std::map<SystemTrace, TraceVerdict> fits_system(const Multiset<SystemTrace>& log, const ColoredNet& sn,
                                                const FitnessOracleConfig& cfg) {
  std::vector<const SystemTrace*> traces;
  for (const auto& [t, n] : log) traces.push_back(&t);
  std::vector<TraceVerdict> verdicts(traces.size());
  parallel_for(traces.size(), cfg.workers,
               [&](std::size_t i) { verdicts[i] = to_verdict(is_run_colored(sn, *traces[i], cfg.limits())); });
  std::map<SystemTrace, TraceVerdict> out;
  for (std::size_t i = 0; i < traces.size(); ++i) out.emplace(*traces[i], std::move(verdicts[i]));
  return out;
}

TraceVerdict fits_nested(const Trace& trace, const NestedNet& np, const FitnessOracleConfig& cfg) {
  auto expand = [&](const NpMarking& m, std::size_t i) {
    Successors out;
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, AgentEvent>)
            expand_agent(np, m, e, out);
          else if constexpr (std::is_same_v<T, SystemEvent>)
            expand_system(np, m, e, out);
          else
            expand_sync(np, m, e, out);
        },
        trace[i]);
    return out;
  };
  auto is_final = [&](const NpMarking& m) { return np.is_final(m); };
  return to_verdict(replay_search<NpMarking, Step>(np.initial_marking, trace.size(), expand, is_final, cfg.limits()));
}

std::string_view to_string(CheckMode mode) noexcept {
  switch (mode) {
    case CheckMode::monolithic: return "monolithic";
    case CheckMode::compositional: return "compositional";
    case CheckMode::both: return "both";
  }
  return "?";
}

Verdict TraceReport::verdict() const {
  std::vector<Verdict> vs;
  if (monolithic) vs.push_back(monolithic->verdict);
  if (compositional) vs.push_back(*compositional);
  bool inconclusive = false;
  for (auto v : vs) {
    if (v == Verdict::does_not_fit) return Verdict::does_not_fit;
    inconclusive |= v == Verdict::inconclusive;
  }
  return inconclusive ? Verdict::inconclusive : Verdict::fits;
}

ConformanceReport check(const EventLog& log, const NestedNet& np, CheckMode mode, const FitnessOracleConfig& cfg) {
  ConformanceReport report;
  report.mode = mode;
  const bool mono = mode != CheckMode::compositional;
  const bool comp = mode != CheckMode::monolithic;

  for (const auto& [trace, n] : log.traces) {
    TraceReport tr;
    tr.trace = trace;
    tr.frequency = n;
    report.total_weight += n;
    report.traces.push_back(std::move(tr));
  }

  if (mono) {
    parallel_for(report.traces.size(), cfg.workers,
                 [&](std::size_t i) { report.traces[i].monolithic = fits_nested(report.traces[i].trace, np, cfg); });
  }

  if (comp) {
    report.syntactic = log_syntactically_correct(log, np);
    for (const auto& f : report.syntactic.failures) report.traces[f.trace].syntax.push_back(f);

    // Distinct projected traces are checked once and shared between traces.
    Multiset<SystemTrace> system_log;
    std::map<NetId, Multiset<AgentTrace>> class_logs;
    for (const auto& tr : report.traces) {
      system_log.add(project_trace_system(tr.trace));
      for (const auto& [agent, cls] : np.agents) class_logs[cls].add(project_trace_agent(tr.trace, agent));
    }
    const auto system_verdicts = fits_system(system_log, system_component(np), cfg);
    std::map<NetId, std::map<AgentTrace, TraceVerdict>> agent_verdicts;
    for (const auto& [cls, l] : class_logs) agent_verdicts[cls] = fits_agent(l, np.elements.at(cls), cfg);

    for (auto& tr : report.traces) {
      tr.components["system"] = system_verdicts.at(project_trace_system(tr.trace));
      for (const auto& [agent, cls] : np.agents)
        tr.components["agent:" + agent.str()] = agent_verdicts.at(cls).at(project_trace_agent(tr.trace, agent));
      Verdict v = Verdict::fits;
      for (const auto& [name, cv] : tr.components) {
        if (cv.verdict == Verdict::does_not_fit) v = Verdict::does_not_fit;
        if (cv.verdict == Verdict::inconclusive && v == Verdict::fits) v = Verdict::inconclusive;
      }
      if (!tr.syntax.empty()) v = Verdict::does_not_fit;
      tr.compositional = v;
    }
    if (!check_label_determinism(np).ok())
      report.notes.push_back(
          "model is not label-deterministic: transitions sharing an activity disagree on sync labels, so "
          "compositional verdicts may differ from whole-net replay");
  }

  report.overall = true;
  for (auto& tr : report.traces) {
    if (mono && comp && tr.monolithic->verdict != Verdict::inconclusive && *tr.compositional != Verdict::inconclusive &&
        tr.monolithic->verdict != *tr.compositional) {
      tr.discrepancy = true;
      ++report.discrepancies;
    }
    const Verdict v = tr.verdict();
    if (v == Verdict::fits) report.fitting_weight += tr.frequency;
    if (v != Verdict::fits) report.overall = false;
    if ((mono && tr.monolithic->verdict == Verdict::inconclusive) ||
        (comp && *tr.compositional == Verdict::inconclusive))
      ++report.inconclusive;
  }
  if (comp && !report.syntactic.ok()) report.overall = false;
  return report;
}

ConformanceReport check_monolithic(const EventLog& log, const NestedNet& np, const FitnessOracleConfig& cfg) {
  return check(log, np, CheckMode::monolithic, cfg);
}

ConformanceReport check_compositional(const EventLog& log, const NestedNet& np, const FitnessOracleConfig& cfg) {
  return check(log, np, CheckMode::compositional, cfg);
}

ConformanceReport check_both(const EventLog& log, const NestedNet& np, const FitnessOracleConfig& cfg) {
  return check(log, np, CheckMode::both, cfg);
}

}  // namespace npconf
