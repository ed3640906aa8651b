#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

namespace npconf {

enum class Verdict { fits, does_not_fit, inconclusive };

constexpr std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::fits: return "fits";
    case Verdict::does_not_fit: return "does_not_fit";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct SearchLimits {
  std::size_t max_states = 1'000'000;
  /// When false, sibling moves are explored in a seeded shuffled order.
  /// Verdicts and failure positions do not depend on the order; witnesses may.
  bool deterministic = true;
  std::uint64_t shuffle_seed = 0;
};

template <class Move>
struct ReplayResult {
  Verdict verdict = Verdict::does_not_fit;
  /// Length of the longest prefix of the input that some move sequence
  /// replays. Exact for fits/does_not_fit, a lower bound when inconclusive.
  std::size_t longest_prefix = 0;
  std::vector<Move> witness;  ///< non-empty only when the sequence fits
  std::size_t visited = 0;

  bool fits() const noexcept { return verdict == Verdict::fits; }
};

/// Depth-first search for a move sequence of exactly `length` moves, where
/// move i must explain input position i, ending in a state accepted by
/// `is_final`. Failed (state, position) pairs are memoized, so each pair is
/// expanded at most once.
///
/// `expand(state, position)` returns the candidate (move, successor) pairs for
/// input position `position`.
template <class State, class Move, class Expand, class IsFinal>
ReplayResult<Move> replay_search(const State& initial, std::size_t length, Expand&& expand,
                                 IsFinal&& is_final, const SearchLimits& limits) {
  struct Frame {
    State state;
    std::size_t position;
    std::vector<std::pair<Move, State>> children;
    std::size_t next = 0;
    bool expanded = false;
  };

  ReplayResult<Move> result;
  std::vector<std::set<State>> failed(length + 1);
  std::vector<Frame> stack;
  std::vector<Move> path;
  std::mt19937_64 rng(limits.shuffle_seed);

  stack.push_back(Frame{initial, 0, {}, 0, false});
  result.visited = 1;

  while (!stack.empty()) {
    Frame& top = stack.back();
    result.longest_prefix = std::max(result.longest_prefix, top.position);

    if (!top.expanded) {
      top.expanded = true;
      if (top.position == length) {
        if (is_final(top.state)) {
          result.verdict = Verdict::fits;
          result.witness = path;
          return result;
        }
      } else {
        top.children = expand(top.state, top.position);
        if (!limits.deterministic) std::shuffle(top.children.begin(), top.children.end(), rng);
      }
    }

    if (top.next < top.children.size()) {
      auto& [move, next_state] = top.children[top.next++];
      const std::size_t next_pos = top.position + 1;
      if (failed[next_pos].count(next_state)) continue;
      if (result.visited >= limits.max_states) {
        result.verdict = Verdict::inconclusive;
        return result;
      }
      ++result.visited;
      path.push_back(move);
      State copy = next_state;
      stack.push_back(Frame{std::move(copy), next_pos, {}, 0, false});
      continue;
    }

    failed[top.position].insert(top.state);
    stack.pop_back();
    if (!path.empty()) path.pop_back();
  }

  result.verdict = Verdict::does_not_fit;
  return result;
}

}  // namespace npconf
