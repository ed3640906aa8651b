#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "npconf/colored_net.hpp"
#include "npconf/event_log.hpp"
#include "npconf/nested_net.hpp"
#include "npconf/projection.hpp"
#include "npconf/replay_search.hpp"

namespace npconf {

struct FitnessOracleConfig {
  std::size_t max_states = 1'000'000;  ///< per trace and component
  bool deterministic_order = true;
  std::uint64_t order_seed = 0;
  unsigned workers = 1;  ///< threads used for per-trace checks

  SearchLimits limits() const { return {max_states, deterministic_order, order_seed}; }
};

using Witness = std::variant<std::monostate, std::vector<TransitionId>, std::vector<BindingElement>, std::vector<Step>>;

struct TraceVerdict {
  Verdict verdict = Verdict::does_not_fit;
  /// Length of the longest replayable prefix; present iff the verdict is
  /// does_not_fit. Equal to the trace length when every event replays but no
  /// final marking is reached.
  std::optional<std::size_t> failure_position;
  Witness witness;  ///< set only when the trace fits
  std::size_t visited = 0;

  bool fits() const noexcept { return verdict == Verdict::fits; }
};

std::map<AgentTrace, TraceVerdict> fits_agent(const Multiset<AgentTrace>& log, const WorkflowNet& w,
                                              const FitnessOracleConfig& cfg = {});

std::map<SystemTrace, TraceVerdict> fits_system(const Multiset<SystemTrace>& log, const ColoredNet& sn,
                                                const FitnessOracleConfig& cfg = {});

/// Searches for a run of np whose i-th step matches the i-th event.
TraceVerdict fits_nested(const Trace& trace, const NestedNet& np, const FitnessOracleConfig& cfg = {});

enum class CheckMode { monolithic, compositional, both };

std::string_view to_string(CheckMode mode) noexcept;

struct TraceReport {
  Trace trace;
  std::size_t frequency = 0;
  std::optional<TraceVerdict> monolithic;
  /// Combined compositional verdict: syntax, system component and every agent.
  std::optional<Verdict> compositional;
  /// "system" and "agent:<name>" component verdicts.
  std::map<std::string, TraceVerdict> components;
  std::vector<SyntaxFailure> syntax;
  bool discrepancy = false;

  Verdict verdict() const;
};

struct ConformanceReport {
  CheckMode mode = CheckMode::both;
  std::vector<TraceReport> traces;  ///< distinct traces, canonical order
  SyntaxReport syntactic;
  std::size_t total_weight = 0;
  std::size_t fitting_weight = 0;
  bool overall = false;  ///< perfect fitness
  std::size_t inconclusive = 0;
  std::size_t discrepancies = 0;
  std::vector<std::string> notes;

  double aggregate() const {
    return total_weight == 0 ? 1.0 : static_cast<double>(fitting_weight) / static_cast<double>(total_weight);
  }
};

ConformanceReport check_monolithic(const EventLog& log, const NestedNet& np, const FitnessOracleConfig& cfg = {});
ConformanceReport check_compositional(const EventLog& log, const NestedNet& np, const FitnessOracleConfig& cfg = {});
/// Runs both checkers and flags every trace on which conclusive verdicts
/// disagree.
ConformanceReport check_both(const EventLog& log, const NestedNet& np, const FitnessOracleConfig& cfg = {});
ConformanceReport check(const EventLog& log, const NestedNet& np, CheckMode mode, const FitnessOracleConfig& cfg = {});

}  // namespace npconf
