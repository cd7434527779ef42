#pragma once

// Adversarial instances and arrival orders, and the exact worst-order search
// for small online sets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "secretary/core.hpp"
#include "secretary/enumeration.hpp"
#include "secretary/policies.hpp"

namespace secretary {

enum class AdversaryOrderKind { IncreasingUnseenFirst, EpsZeroOrder, Exhaustive };

struct AdversaryOrderSpec {
  AdversaryOrderKind kind = AdversaryOrderKind::IncreasingUnseenFirst;
  std::size_t exhaustive_cap = 8;  // largest n searched exhaustively
};

/// Online candidates that beat the best history candidate, in increasing
/// order, followed by the rest in decreasing order (none of which is then a
/// running maximum).
inline ArrivalOrder increasing_unseen_first(const Instance& instance, const SplitSample& split) {
  std::optional<CandidateKey> best_seen;
  for (std::size_t i : split.history) {
    if (!best_seen || instance.key(i) > *best_seen) best_seen = instance.key(i);
  }
  std::vector<std::size_t> unseen;
  std::vector<std::size_t> rest;
  for (std::size_t i : split.online) {
    (!best_seen || instance.key(i) > *best_seen ? unseen : rest).push_back(i);
  }
  auto by_key = [&](std::size_t a, std::size_t b) { return instance.key(a) < instance.key(b); };
  std::sort(unseen.begin(), unseen.end(), by_key);
  std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return by_key(b, a); });
  ArrivalOrder order;
  order.sequence = std::move(unseen);
  order.sequence.insert(order.sequence.end(), rest.begin(), rest.end());
  return order;
}

enum class EpsZeroVariant { I1, I2 };

/// m candidates of value epsilon and the rest of value 0 (I1); I2 also
/// replaces one zero by a candidate of value (n+h)/n at index 0.
struct EpsZeroFamily {
  std::size_t n = 1;
  std::size_t h = 0;
  double epsilon = 0.01;
  EpsZeroVariant variant = EpsZeroVariant::I1;
  std::size_t m = 1;

  /// m = floor((n+h)/2): the two-instance construction against the 1/2 barrier.
  static EpsZeroFamily half_split(std::size_t n, std::size_t h, double epsilon,
                                  EpsZeroVariant variant) {
    return {n, h, epsilon, variant, (n + h) / 2};
  }

  /// m = ceil(((n+h)/n) ln n): the worst-case vs random-order trade-off construction.
  static EpsZeroFamily tradeoff(std::size_t n, std::size_t h, double epsilon,
                                EpsZeroVariant variant) {
    const double nn = static_cast<double>(n);
    const double raw = (nn + static_cast<double>(h)) / nn * std::log(nn);
    // Guard against ln rounding pushing an exact integer up by one.
    const auto m = static_cast<std::size_t>(std::ceil(raw - 1e-12));
    return {n, h, epsilon, variant, m};
  }
};

inline Instance eps_zero_instance(const EpsZeroFamily& family) {
  const std::size_t total = family.n + family.h;
  if (family.n == 0) throw Error(ErrorCode::BadShape, "n must be at least 1");
  if (!(family.epsilon > 0.0)) throw Error(ErrorCode::BadShape, "epsilon must be positive");
  if (family.m == 0 || family.m > total) throw Error(ErrorCode::BadShape, "need 1 <= m <= n+h");
  std::vector<double> values;
  values.reserve(total);
  if (family.variant == EpsZeroVariant::I2) {
    if (family.m > total - 1) throw Error(ErrorCode::BadShape, "I2 needs m <= n+h-1");
    const double alpha = static_cast<double>(total) / static_cast<double>(family.n);
    if (!(alpha > family.epsilon)) throw Error(ErrorCode::BadShape, "alpha must exceed epsilon");
    values.push_back(alpha);
  }
  values.insert(values.end(), family.m, family.epsilon);
  values.resize(total, 0.0);
  return make_instance(std::move(values), family.h);
}

/// Online epsilon candidates, then online zeros, then alpha if online; each
/// block by increasing index.
inline ArrivalOrder eps_zero_order(const Instance& instance, const SplitSample& split) {
  const auto values = instance.values();
  double eps = std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (v > 0.0) eps = std::min(eps, v);
  }
  std::optional<std::size_t> alpha;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0 && values[i] != eps) {
      if (i != 0 || alpha) {
        throw Error(ErrorCode::NotEpsZeroInstance, "values are not of the epsilon/zero form");
      }
      alpha = i;
    }
  }
  if (!std::isfinite(eps)) throw Error(ErrorCode::NotEpsZeroInstance, "no positive value");
  ArrivalOrder order;
  for (std::size_t i : split.online) {
    if (values[i] == eps && i != alpha) order.sequence.push_back(i);
  }
  for (std::size_t i : split.online) {
    if (values[i] == 0.0) order.sequence.push_back(i);
  }
  for (std::size_t i : split.online) {
    if (alpha && i == *alpha) order.sequence.push_back(i);
  }
  return order;
}

/// Expected profit of one (split, order) world over the policy's internal
/// randomness, with the profit split by accepting round.
struct WorldExpectation {
  long double profit = 0.0L;
  std::vector<long double> per_round;
  std::uint64_t leaves = 0;
};

inline WorldExpectation expected_outcome(const PolicySpec& spec, const Instance& instance,
                                         const SplitSample& split, const ArrivalOrder& order,
                                         const EnumerationLimits& limits = {}) {
  WorldExpectation result;
  result.per_round.assign(instance.n(), 0.0L);
  std::vector<CompensatedSum> rounds(instance.n());
  CompensatedSum total;
  result.leaves = enumerate_choices(
      [&](ReplayChoices& choices) { return run_policy(spec, instance, split, order, choices); },
      [&](const TrialOutcome& outcome, long double weight) {
        if (!outcome.accept_round) return;
        const long double gain = weight * static_cast<long double>(outcome.profit);
        total.add(gain);
        rounds[*outcome.accept_round - 1].add(gain);
      },
      limits);
  result.profit = total.value();
  for (std::size_t r = 0; r < rounds.size(); ++r) result.per_round[r] = rounds[r].value();
  return result;
}

struct WorstOrder {
  ArrivalOrder order;
  double expected_profit = 0.0;
  WorldExpectation detail;
  std::uint64_t leaves = 0;  // summed over all orders tried
};

/// Minimizes the policy's expected profit over all n! arrival orders. The
/// adversary sees the history but not the policy's random draws, so each
/// order is scored by its expectation over those draws.
inline WorstOrder worst_order_value(const Instance& instance, const SplitSample& split,
                                    const PolicySpec& spec, const EnumerationLimits& limits = {},
                                    std::size_t max_n = 8) {
  if (instance.n() > max_n) {
    throw Error(ErrorCode::TooLarge, "exhaustive order search is capped at n = " +
                                         std::to_string(max_n));
  }
  ArrivalOrder order{split.online};
  std::sort(order.sequence.begin(), order.sequence.end());
  WorstOrder worst;
  bool first = true;
  do {
    WorldExpectation e = expected_outcome(spec, instance, split, order, limits);
    worst.leaves += e.leaves;
    if (first || e.profit < worst.detail.profit) {
      worst.order = order;
      worst.detail = std::move(e);
      first = false;
    }
  } while (std::next_permutation(order.sequence.begin(), order.sequence.end()));
  worst.expected_profit = static_cast<double>(worst.detail.profit);
  return worst;
}

/// Order chosen by a non-exhaustive adversary.
inline ArrivalOrder adversary_order(AdversaryOrderKind kind, const Instance& instance,
                                    const SplitSample& split) {
  switch (kind) {
    case AdversaryOrderKind::IncreasingUnseenFirst:
      return increasing_unseen_first(instance, split);
    case AdversaryOrderKind::EpsZeroOrder:
      return eps_zero_order(instance, split);
    case AdversaryOrderKind::Exhaustive:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "exhaustive orders depend on the policy");
}

}  // namespace secretary
