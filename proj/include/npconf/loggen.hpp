#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npconf/event_log.hpp"
#include "npconf/nested_net.hpp"

namespace npconf {

struct SimulationConfig {
  std::uint64_t seed = 0;
  std::size_t trace_count = 100;
  std::size_t max_steps = 64;
  /// Expanded markings per trace before the attempt is abandoned.
  std::size_t max_expansions = 100'000;
  /// Reachable markings explored up front to steer every trace. When the
  /// state space is larger the per-trace search is used. 0 disables.
  std::size_t guide_states = 20'000;
  unsigned workers = 1;
};

struct SimulatedRun {
  Trace trace;
  std::vector<Step> steps;
};

/// The event a step leaves in the log.
Event event_of(const NestedNet& np, const Step& s);

/// Random run from the initial marking to a final marking, choosing uniformly
/// among enabled steps and backtracking out of dead ends. Deterministic in
/// (np, seed). Empty when no run is found within the limits.
std::optional<SimulatedRun> simulate_run(const NestedNet& np, std::uint64_t seed, std::size_t max_steps,
                                         std::size_t max_expansions = 100'000);

/// Seed of trace `index`, derived so that traces can be generated in any order.
std::uint64_t trace_seed(std::uint64_t seed, std::size_t index);

/// trace_count simulated traces. Throws GenerationError if any trace fails.
EventLog generate_log(const NestedNet& np, const SimulationConfig& cfg);

enum class NoiseOp { swap, drop, relabel, retarget };

std::string_view to_string(NoiseOp op) noexcept;

struct NoiseSpec {
  double swap = 0.0;      ///< exchange two adjacent events
  double drop = 0.0;      ///< delete one event
  double relabel = 0.0;   ///< replace an event's activity
  double retarget = 0.0;  ///< replace one agent of an event
  std::uint64_t seed = 0;
  std::vector<ActivityName> activities;
  std::vector<AgentName> agents;

  /// Fills the vocabularies with every activity and agent of np.
  NoiseSpec& vocabulary_of(const NestedNet& np);
};

/// One applied perturbation. `instance` counts trace occurrences of the input
/// log in canonical order, repeated by frequency.
struct Change {
  std::size_t instance = 0;
  NoiseOp op = NoiseOp::swap;
  std::size_t position = 0;
  std::string from;  ///< relabel: old activity, retarget: old agent
  std::string to;
  friend bool operator==(const Change&, const Change&) = default;
};

struct PerturbedLog {
  EventLog log;
  std::vector<Change> manifest;
};

/// Each trace occurrence gets each operation at most once, with the spec's
/// probability, in the order swap, drop, relabel, retarget. Throws
/// std::invalid_argument for probabilities outside [0, 1].
PerturbedLog perturb_log(const EventLog& log, const NoiseSpec& spec);

/// Trace occurrences in canonical order, each repeated by its frequency.
std::vector<Trace> expand_instances(const EventLog& log);

/// Replays one manifest entry on a trace.
void apply_change(Trace& trace, const Change& change);

}  // namespace npconf
