#pragma once

// Exact expected values for small instances. Every split of the candidates
// into history and online set, every arrival order (or the worst one), and
// every outcome of the policy's internal subset draws is visited once with
// its probability.
//
// Probabilities are products of 1/C(N, k) held in long double and summed with
// compensation, which keeps results within ~1e-16 relative of the rational
// value for every instance the budget admits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "secretary/adversaries.hpp"
#include "secretary/bounds.hpp"
#include "secretary/combinatorics.hpp"
#include "secretary/core.hpp"
#include "secretary/enumeration.hpp"
#include "secretary/policies.hpp"

namespace secretary {

struct ExactResult {
  double expected_alg = 0.0;
  double expected_opt = 0.0;
  double ratio = 0.0;
  std::vector<double> per_round_profit;  // E[profit collected in round l], l = 1..n
  std::uint64_t enumerated_worlds = 0;   // (split, order, internal draw) leaves visited
};

struct OracleOptions {
  double budget = 1e8;  // cap on the worst-case leaf count
  std::size_t threads = 1;
  EnumerationLimits limits{};
  std::size_t max_exhaustive_n = 8;
};

/// Worst-case number of internal-randomness outcomes of one run.
inline long double internal_branching(const PolicySpec& spec, std::size_t n, std::size_t h) {
  switch (spec.kind) {
    case PolicyKind::AosShort:
    case PolicyKind::Never:
      return 1.0L;
    case PolicyKind::AosLong:
      return h + 1 >= n ? binomial_ld(h, n - 1) : 1.0L;
    case PolicyKind::Ros: {
      const std::size_t q = spec.q_rounds ? *spec.q_rounds : q_schedule(n, h).q_rounds;
      long double product = 1.0L;
      for (std::size_t round = q + 1; round <= n; ++round) {
        if (h + round > n) product *= binomial_ld(h + round - 1, n - 1);
      }
      return product;
    }
    case PolicyKind::Combined: {
      const std::size_t pool = n * (n - 1);
      if (h < pool) return 1.0L;
      long double product = binomial_ld(h, pool);
      for (std::size_t left = pool; left >= n - 1 && left > 0; left -= n - 1) {
        product *= binomial_ld(left, n - 1);
      }
      return product;
    }
  }
  return 1.0L;
}

/// Worst-case leaf count of a full enumeration; `all_orders` is false when
/// only one order per split is scored.
inline long double estimated_leaves(const Instance& instance, const PolicySpec& spec,
                                    bool all_orders = true) {
  const std::size_t n = instance.n();
  const std::size_t h = instance.h();
  long double orders = 1.0L;
  if (all_orders) {
    for (std::size_t i = 2; i <= n; ++i) orders *= static_cast<long double>(i);
  }
  return binomial_ld(n + h, h) * orders * internal_branching(spec, n, h);
}

namespace detail {

inline void check_budget(const Instance& instance, const PolicySpec& spec,
                         const OracleOptions& options) {
  const long double leaves = estimated_leaves(instance, spec);
  if (leaves > static_cast<long double>(options.budget)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "about %.3Lg leaves exceed the budget of %.3g", leaves,
                  options.budget);
    throw Error(ErrorCode::BudgetExceeded, buf);
  }
}

struct SplitTally {
  CompensatedSum alg;
  std::vector<CompensatedSum> rounds;
  double opt = 0.0;
  std::uint64_t leaves = 0;
};

inline SplitSample split_by_rank(const Instance& instance, std::uint64_t rank) {
  std::vector<std::size_t> history;
  unrank_combination(instance.size(), instance.h(), rank, history);
  return make_split(instance, std::move(history));
}

template <typename PerSplit>
ExactResult enumerate_splits(const Instance& instance, const OracleOptions& options,
                             long double orders_per_split, PerSplit&& per_split) {
  const std::uint64_t splits = *binomial(instance.size(), instance.h());
  std::vector<SplitTally> tallies(splits);
  parallel_for(splits, options.threads, [&](std::size_t s) {
    SplitTally& tally = tallies[s];
    tally.rounds.resize(instance.n());
    const SplitSample split = split_by_rank(instance, s);
    tally.opt = opt_value(instance, split);
    per_split(split, tally);
  });

  CompensatedSum alg;
  CompensatedSum opt;
  std::vector<CompensatedSum> rounds(instance.n());
  ExactResult result;
  for (const SplitTally& tally : tallies) {
    alg.add(tally.alg.value());
    opt.add(tally.opt);
    for (std::size_t r = 0; r < rounds.size(); ++r) rounds[r].add(tally.rounds[r].value());
    result.enumerated_worlds += tally.leaves;
  }
  const long double worlds = static_cast<long double>(splits) * orders_per_split;
  result.expected_alg = static_cast<double>(alg.value() / worlds);
  result.expected_opt = static_cast<double>(opt.value() / static_cast<long double>(splits));
  result.per_round_profit.resize(instance.n());
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    result.per_round_profit[r] = static_cast<double>(rounds[r].value() / worlds);
  }
  result.ratio = result.expected_opt > 0.0 ? result.expected_alg / result.expected_opt : 0.0;
  return result;
}

}  // namespace detail

/// Exact expectation under uniformly random arrival order.
inline ExactResult exact_ros(const Instance& instance, const PolicySpec& spec,
                             const OracleOptions& options = {}) {
  detail::check_budget(instance, spec, options);
  long double orders = 1.0L;
  for (std::size_t i = 2; i <= instance.n(); ++i) orders *= static_cast<long double>(i);
  return detail::enumerate_splits(
      instance, options, orders, [&](const SplitSample& split, detail::SplitTally& tally) {
        ArrivalOrder order{split.online};
        do {
          const WorldExpectation e = expected_outcome(spec, instance, split, order, options.limits);
          tally.alg.add(e.profit);
          for (std::size_t r = 0; r < e.per_round.size(); ++r) tally.rounds[r].add(e.per_round[r]);
          tally.leaves += e.leaves;
        } while (std::next_permutation(order.sequence.begin(), order.sequence.end()));
      });
}

/// Exact expectation when an adversary picks the worst order after seeing the
/// history. per_round_profit follows the worst order of each split.
inline ExactResult exact_aos(const Instance& instance, const PolicySpec& spec,
                             const OracleOptions& options = {}) {
  if (instance.n() > options.max_exhaustive_n) {
    throw Error(ErrorCode::TooLarge, "exhaustive order search is capped at n = " +
                                         std::to_string(options.max_exhaustive_n));
  }
  detail::check_budget(instance, spec, options);
  return detail::enumerate_splits(
      instance, options, 1.0L, [&](const SplitSample& split, detail::SplitTally& tally) {
        const WorstOrder worst =
            worst_order_value(instance, split, spec, options.limits, options.max_exhaustive_n);
        tally.alg.add(worst.detail.profit);
        for (std::size_t r = 0; r < worst.detail.per_round.size(); ++r) {
          tally.rounds[r].add(worst.detail.per_round[r]);
        }
        tally.leaves += worst.leaves;
      });
}

/// Exact expectation when the order of each split comes from a fixed
/// adversary (no minimization).
inline ExactResult exact_fixed_adversary(const Instance& instance, const PolicySpec& spec,
                                         AdversaryOrderKind kind,
                                         const OracleOptions& options = {}) {
  if (estimated_leaves(instance, spec, false) > static_cast<long double>(options.budget)) {
    throw Error(ErrorCode::BudgetExceeded, "enumeration exceeds the budget");
  }
  return detail::enumerate_splits(
      instance, options, 1.0L, [&](const SplitSample& split, detail::SplitTally& tally) {
        const ArrivalOrder order = adversary_order(kind, instance, split);
        const WorldExpectation e = expected_outcome(spec, instance, split, order, options.limits);
        tally.alg.add(e.profit);
        for (std::size_t r = 0; r < e.per_round.size(); ++r) tally.rounds[r].add(e.per_round[r]);
        tally.leaves += e.leaves;
      });
}

/// E[max of a uniform k-subset of `values`]:
/// sum over ascending v_(i) of v_(i) C(i-1, k-1) / C(N, k).
inline double expected_max_of_subset(std::vector<double> values, std::size_t k) {
  const std::size_t total = values.size();
  if (k == 0 || k > total) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= |values|");
  std::sort(values.begin(), values.end());
  const long double all = binomial_ld(total, k);
  CompensatedSum sum;
  for (std::size_t i = k; i <= total; ++i) {
    sum.add(static_cast<long double>(values[i - 1]) * binomial_ld(i - 1, k - 1) / all);
  }
  return static_cast<double>(sum.value());
}

/// Expected profit of the random-order policy in `round`, written with the
/// exact phase-1 term reach * E[max of a uniform (h+round)-subset] / (h+round).
/// Phase-2 rounds use reach / n * E[OPT].
inline double predicted_round_profit(const Instance& instance, std::size_t q_rounds,
                                     std::size_t round) {
  const std::size_t n = instance.n();
  const std::size_t h = instance.h();
  if (round < 1 || round > n) throw Error(ErrorCode::InvalidArgument, "round out of range");
  if (round <= q_rounds) return 0.0;
  const double reach = ros_reach_probability(n, h, q_rounds, round);
  const std::vector<double> values(instance.values().begin(), instance.values().end());
  if (h + round <= n) {
    return reach * expected_max_of_subset(values, h + round) / static_cast<double>(h + round);
  }
  return reach / static_cast<double>(n) * expected_max_of_subset(values, n);
}

/// max over rounds of |exact per-round profit - analytic_round_profit * E[OPT]|
/// for the random-order policy with a fixed sampling length.
inline double per_round_cross_check(std::size_t n, std::size_t h, std::size_t q_rounds,
                                    const std::vector<double>& values,
                                    const OracleOptions& options = {}) {
  if (values.size() != n + h) {
    throw Error(ErrorCode::InvalidArgument, "value profile must have n+h entries");
  }
  const Instance instance = make_instance(values, h);
  PolicySpec spec{PolicyKind::Ros, q_rounds, false};
  const ExactResult exact = exact_ros(instance, spec, options);
  double worst = 0.0;
  for (std::size_t round = 1; round <= n; ++round) {
    const double predicted = analytic_round_profit(n, h, q_rounds, round) * exact.expected_opt;
    worst = std::max(worst, std::abs(exact.per_round_profit[round - 1] - predicted));
  }
  return worst;
}

/// Binomial subset-size inequality C(n, k) <= C(r n, k) / r^k, checked for the
/// given r over all 0 <= k <= n <= max_n with r n integral.
inline bool proposition_a_holds(double r, std::size_t max_n = 30) {
  for (std::size_t n = 0; n <= max_n; ++n) {
    const double rn = r * static_cast<double>(n);
    if (std::abs(rn - std::round(rn)) > 1e-9) continue;
    const auto big = static_cast<std::uint64_t>(std::llround(rn));
    for (std::size_t k = 0; k <= n; ++k) {
      const long double lhs = binomial_ld(n, k);
      const long double rhs = binomial_ld(big, k) / std::pow(static_cast<long double>(r), k);
      if (lhs > rhs * (1.0L + 1e-15L)) return false;
    }
  }
  return true;
}

struct PropositionReport {
  double expected_max_small = 0.0;  // E[max A], |A| = k
  double expected_max_large = 0.0;  // E[max B], |B| = n
  bool subset_max_holds = false;    // E[max A] >= (k/n) E[max B]
  bool binomial_holds = false;      // proposition_a_holds for r in {1, 1.5, 2, 3}
  [[nodiscard]] bool ok() const { return subset_max_holds && binomial_holds; }
};

/// Enumerates every k-subset and n-subset of `ground_set` for the subset-max
/// inequality, and checks the binomial inequality on its full range.
inline PropositionReport proposition_checks(std::size_t k, std::size_t n,
                                            const std::vector<double>& ground_set) {
  if (ground_set.size() > 20 || k == 0 || k > n || n > ground_set.size()) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n <= |ground set| <= 20");
  }
  auto mean_max = [&](std::size_t size) {
    CompensatedSum sum;
    std::uint64_t count = 0;
    for_each_combination(ground_set.size(), size, [&](const std::vector<std::size_t>& idx) {
      double best = ground_set[idx[0]];
      for (std::size_t i : idx) best = std::max(best, ground_set[i]);
      sum.add(best);
      ++count;
    });
    return static_cast<double>(sum.value() / static_cast<long double>(count));
  };
  PropositionReport report;
  report.expected_max_small = mean_max(k);
  report.expected_max_large = mean_max(n);
  const double rhs = static_cast<double>(k) / static_cast<double>(n) * report.expected_max_large;
  report.subset_max_holds = report.expected_max_small >= rhs - 1e-12 * std::max(1.0, std::abs(rhs));
  report.binomial_holds = true;
  for (double r : {1.0, 1.5, 2.0, 3.0}) report.binomial_holds &= proposition_a_holds(r);
  return report;
}

}  // namespace secretary
