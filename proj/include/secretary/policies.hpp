#pragma once

// Online selection policies behind one step-wise contract:
//
//   auto state = init(spec, history, n, source);
//   for round = 1..n: if (decide(state, candidate, round, source)) stop;
//
// Every rule is comparison-based on CandidateKey, so decisions depend only on
// the relative order of values. Internal randomness is requested from a
// ChoiceSource as "a uniform k-subset of {0..N-1}"; RandomStream samples it,
// the exact oracle enumerates it.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "secretary/bounds.hpp"
#include "secretary/core.hpp"
#include "secretary/random.hpp"

namespace secretary {

template <typename S>
concept ChoiceSource = requires(S& s, std::size_t n, std::vector<std::size_t>& out) {
  s.choose_subset(n, n, out);
};

enum class PolicyKind {
  AosShort,  // accept a running maximum over history + arrivals
  AosLong,   // accept anything above the max of a random (n-1)-subset of history
  Ros,       // sampling phase, then running maximum, then fresh random thresholds
  Combined,  // per-round thresholds from a random partition of history
  Never,     // baseline that rejects everyone
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::AosShort;
  std::optional<std::size_t> q_rounds;  // Ros: override the sampling length
  bool predraw_phase2 = false;          // Ros: draw every phase-2 subset at init
};

inline std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::AosShort: return "alg1";
    case PolicyKind::AosLong: return "alg2";
    case PolicyKind::Ros: return "alg3";
    case PolicyKind::Combined: return "combined";
    case PolicyKind::Never: return "never";
  }
  return "?";
}

inline PolicySpec parse_policy(std::string_view name, std::optional<std::size_t> q_rounds = {}) {
  PolicySpec spec;
  if (name == "alg1") {
    spec.kind = PolicyKind::AosShort;
  } else if (name == "alg2") {
    spec.kind = PolicyKind::AosLong;
  } else if (name == "alg3") {
    spec.kind = PolicyKind::Ros;
  } else if (name == "combined") {
    spec.kind = PolicyKind::Combined;
  } else if (name == "never") {
    spec.kind = PolicyKind::Never;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown policy '" + std::string(name) + "'");
  }
  if (q_rounds && spec.kind != PolicyKind::Ros) {
    throw Error(ErrorCode::InvalidArgument, "--q-rounds only applies to alg3");
  }
  spec.q_rounds = q_rounds;
  return spec;
}

enum class Phase { Sampling, Phase1, Phase2 };

struct PolicyState {
  PolicySpec spec;
  std::size_t n = 0;
  std::size_t h = 0;
  // Sorted history followed by the arrivals so far; size h + round.
  std::vector<CandidateKey> observed;
  std::optional<CandidateKey> running_max;
  // AosLong: max of the drawn subset T. Ros: max of the current round's X.
  std::optional<CandidateKey> threshold;
  Phase phase = Phase::Sampling;
  std::size_t round = 0;
  std::size_t q_rounds = 0;
  // Combined: S_1..S_n.
  std::vector<std::vector<CandidateKey>> fixed_subsets;
  // Ros with predraw_phase2: index subsets into `observed`, one per round.
  std::vector<std::vector<std::size_t>> predrawn;
  bool accepted = false;
};

namespace detail {

inline std::optional<CandidateKey> max_of(std::span<const CandidateKey> keys) {
  if (keys.empty()) return std::nullopt;
  return *std::max_element(keys.begin(), keys.end());
}

inline std::optional<CandidateKey> max_at(std::span<const CandidateKey> keys,
                                          std::span<const std::size_t> at) {
  std::optional<CandidateKey> best;
  for (std::size_t i : at) {
    if (!best || keys[i] > *best) best = keys[i];
  }
  return best;
}

inline bool beats(const CandidateKey& c, const std::optional<CandidateKey>& bar) {
  return !bar || c > *bar;
}

inline Phase ros_phase(std::size_t n, std::size_t h, std::size_t q_rounds, std::size_t round) {
  if (round <= q_rounds) return Phase::Sampling;
  if (h + round <= n) return Phase::Phase1;
  return Phase::Phase2;
}

}  // namespace detail

template <ChoiceSource Source>
PolicyState init(const PolicySpec& spec, std::span<const CandidateKey> history, std::size_t n,
                 Source& source) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  PolicyState state;
  state.spec = spec;
  state.n = n;
  state.h = history.size();
  state.observed.assign(history.begin(), history.end());
  std::sort(state.observed.begin(), state.observed.end());
  state.running_max = detail::max_of(state.observed);
  const std::size_t h = state.h;

  std::vector<std::size_t> pick;
  switch (spec.kind) {
    case PolicyKind::AosShort:
    case PolicyKind::Never:
      break;
    case PolicyKind::AosLong: {
      if (h + 1 < n) {
        throw Error(ErrorCode::HistoryTooSmall,
                    "alg2 needs h >= n-1 (h=" + std::to_string(h) + ", n=" + std::to_string(n) + ")");
      }
      source.choose_subset(h, n - 1, pick);
      state.threshold = detail::max_at(state.observed, pick);
      break;
    }
    case PolicyKind::Ros: {
      state.q_rounds = spec.q_rounds ? *spec.q_rounds : q_schedule(n, h).q_rounds;
      if (state.q_rounds > n) throw Error(ErrorCode::InvalidArgument, "q_rounds must be <= n");
      state.phase = detail::ros_phase(n, h, state.q_rounds, 1);
      if (spec.predraw_phase2) {
        state.predrawn.resize(n);
        for (std::size_t round = 1; round <= n; ++round) {
          if (detail::ros_phase(n, h, state.q_rounds, round) == Phase::Phase2) {
            source.choose_subset(h + round - 1, n - 1, state.predrawn[round - 1]);
          }
        }
      }
      break;
    }
    case PolicyKind::Combined: {
      const std::size_t block = n - 1;
      if (h < n * block) {
        throw Error(ErrorCode::HistoryTooSmall, "combined needs h >= n(n-1) (h=" +
                                                    std::to_string(h) + ", n=" +
                                                    std::to_string(n) + ")");
      }
      // A uniform n(n-1)-subset of history, then S_1, S_2, ... as successive
      // uniform (n-1)-subsets of what remains: a uniform ordered partition.
      std::vector<std::size_t> pool;
      source.choose_subset(h, n * block, pool);
      std::sort(pool.begin(), pool.end());
      state.fixed_subsets.resize(n);
      for (std::size_t s = 0; s < n; ++s) {
        source.choose_subset(pool.size(), block, pick);
        std::sort(pick.begin(), pick.end());
        auto& subset = state.fixed_subsets[s];
        for (std::size_t i : pick) subset.push_back(state.observed[pool[i]]);
        for (auto it = pick.rbegin(); it != pick.rend(); ++it) {
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(*it));
        }
      }
      break;
    }
  }
  return state;
}

/// Offers `candidate` in round `round`; returns true iff the policy accepts.
template <ChoiceSource Source>
bool decide(PolicyState& state, const CandidateKey& candidate, std::size_t round,
            Source& source) {
  if (state.accepted) throw Error(ErrorCode::CalledAfterAccept, "policy already accepted");
  if (round != state.round + 1 || round > state.n) {
    throw Error(ErrorCode::RoundSkew, "expected round " + std::to_string(state.round + 1) +
                                          ", got " + std::to_string(round));
  }
  state.round = round;
  bool accept = false;
  switch (state.spec.kind) {
    case PolicyKind::AosShort:
      accept = detail::beats(candidate, state.running_max);
      break;
    case PolicyKind::AosLong:
      accept = detail::beats(candidate, state.threshold);
      break;
    case PolicyKind::Ros: {
      state.phase = detail::ros_phase(state.n, state.h, state.q_rounds, round);
      if (state.phase == Phase::Phase1) {
        accept = detail::beats(candidate, state.running_max);
      } else if (state.phase == Phase::Phase2) {
        if (state.spec.predraw_phase2) {
          state.threshold = detail::max_at(state.observed, state.predrawn[round - 1]);
        } else {
          thread_local std::vector<std::size_t> pick;
          source.choose_subset(state.observed.size(), state.n - 1, pick);
          state.threshold = detail::max_at(state.observed, pick);
        }
        accept = detail::beats(candidate, state.threshold);
      }
      break;
    }
    case PolicyKind::Combined:
      accept = detail::beats(candidate, detail::max_of(state.fixed_subsets[round - 1]));
      break;
    case PolicyKind::Never:
      break;
  }
  state.observed.push_back(candidate);
  if (detail::beats(candidate, state.running_max)) state.running_max = candidate;
  state.accepted = accept;
  return accept;
}

/// Drives one policy over a fixed split and arrival order.
template <ChoiceSource Source>
TrialOutcome run_policy(const PolicySpec& spec, const Instance& instance,
                        const SplitSample& split, const ArrivalOrder& order, Source& source) {
  if (order.sequence.size() != instance.n() || split.history.size() != instance.h()) {
    throw Error(ErrorCode::InvalidArgument, "split/order do not match the instance");
  }
  TrialOutcome outcome;
  outcome.opt_value = opt_value(instance, split);
  const auto history = keys_of(instance, split.history);
  PolicyState state = init(spec, history, instance.n(), source);
  for (std::size_t round = 1; round <= order.sequence.size(); ++round) {
    const std::size_t c = order.sequence[round - 1];
    if (decide(state, instance.key(c), round, source)) {
      outcome.accepted = c;
      outcome.profit = instance.value(c);
      outcome.accept_round = round;
      break;
    }
  }
  return outcome;
}

}  // namespace secretary
