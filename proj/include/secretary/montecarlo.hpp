#pragma once

// Seeded Monte Carlo estimates of E[ALG] / E[OPT].
//
// Trial t always draws from RandomStream(seed, t). Trials are grouped into
// fixed blocks whose partial sums are merged in block order, so an estimate is
// bit-identical for any number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "secretary/adversaries.hpp"
#include "secretary/combinatorics.hpp"
#include "secretary/core.hpp"
#include "secretary/enumeration.hpp"
#include "secretary/oracle.hpp"
#include "secretary/policies.hpp"
#include "secretary/random.hpp"

namespace secretary {

struct RatioEstimate {
  double mean_alg = 0.0;
  double mean_opt = 0.0;
  double ratio = 0.0;
  double alg_std_err = 0.0;    // standard error of mean_alg
  double ratio_std_err = 0.0;  // delta-method standard error of ratio
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Number of worker threads: SECRETARY_THREADS if set to a positive integer,
/// otherwise the hardware concurrency.
inline std::size_t threads_from_env() {
  if (const char* env = std::getenv("SECRETARY_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return default_threads();
}

namespace detail {

inline constexpr std::uint64_t kTrialBlock = 4096;

struct MomentSums {
  CompensatedSum alg, alg2, opt, opt2, cross;

  void add(double a, double o) {
    alg.add(a);
    alg2.add(static_cast<long double>(a) * a);
    opt.add(o);
    opt2.add(static_cast<long double>(o) * o);
    cross.add(static_cast<long double>(a) * o);
  }
  void merge(const MomentSums& other) {
    alg.add(other.alg.value());
    alg2.add(other.alg2.value());
    opt.add(other.opt.value());
    opt2.add(other.opt2.value());
    cross.add(other.cross.value());
  }
};

inline RatioEstimate summarize(const MomentSums& sums, std::uint64_t trials, std::uint64_t seed) {
  const long double t = static_cast<long double>(trials);
  const long double ma = sums.alg.value() / t;
  const long double mo = sums.opt.value() / t;
  RatioEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.mean_alg = static_cast<double>(ma);
  est.mean_opt = static_cast<double>(mo);
  est.ratio = mo > 0 ? static_cast<double>(ma / mo) : 0.0;
  if (trials > 1) {
    auto centered = [&](long double sxy, long double mx, long double my) {
      return std::max<long double>(0.0L, (sxy - t * mx * my) / (t - 1));
    };
    const long double var_a = centered(sums.alg2.value(), ma, ma);
    const long double var_o = centered(sums.opt2.value(), mo, mo);
    const long double cov = (sums.cross.value() - t * ma * mo) / (t - 1);
    est.alg_std_err = static_cast<double>(std::sqrt(var_a / t));
    if (mo > 0) {
      const long double r = ma / mo;
      const long double var_r = (var_a - 2 * r * cov + r * r * var_o) / (mo * mo * t);
      est.ratio_std_err = static_cast<double>(std::sqrt(std::max<long double>(0.0L, var_r)));
    }
  }
  return est;
}

}  // namespace detail

/// Runs trial(t, rng) -> pair(alg profit, opt value) for t in [0, trials).
template <typename Trial>
RatioEstimate run_blocked_trials(std::uint64_t trials, std::uint64_t seed, std::size_t threads,
                                 Trial&& trial) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (threads == 0) threads = threads_from_env();
  const std::uint64_t blocks = (trials + detail::kTrialBlock - 1) / detail::kTrialBlock;
  std::vector<detail::MomentSums> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t begin = b * detail::kTrialBlock;
    const std::uint64_t end = std::min(trials, begin + detail::kTrialBlock);
    for (std::uint64_t t = begin; t < end; ++t) {
      RandomStream rng(seed, t);
      const auto [alg, opt] = trial(t, rng);
      partial[b].add(alg, opt);
    }
  });
  detail::MomentSums total;
  for (const auto& p : partial) total.merge(p);
  return detail::summarize(total, trials, seed);
}

enum class OrderModel { Random, IncreasingUnseen, EpsZero, Exhaustive };

inline std::string to_string(OrderModel model) {
  switch (model) {
    case OrderModel::Random: return "random";
    case OrderModel::IncreasingUnseen: return "increasing-unseen";
    case OrderModel::EpsZero: return "eps-zero";
    case OrderModel::Exhaustive: return "exhaustive";
  }
  return "?";
}

inline OrderModel parse_order_model(const std::string& name) {
  if (name == "random") return OrderModel::Random;
  if (name == "increasing-unseen") return OrderModel::IncreasingUnseen;
  if (name == "eps-zero") return OrderModel::EpsZero;
  if (name == "exhaustive") return OrderModel::Exhaustive;
  throw Error(ErrorCode::InvalidArgument, "unknown order '" + name + "'");
}

struct TrialOptions {
  std::size_t threads = 0;  // 0: SECRETARY_THREADS or hardware concurrency
  EnumerationLimits limits{};
  std::size_t exhaustive_cap = 8;
  double budget = 1e8;  // leaf cap for exact worst-order tables
};

/// Per trial: a uniform split, an order from `model`, one run of the policy.
/// OrderModel::Random is the random-order model; the others are adversaries
/// that see the history.
inline RatioEstimate run_trials(const Instance& instance, const PolicySpec& spec,
                                OrderModel model, std::uint64_t trials, std::uint64_t seed,
                                const TrialOptions& options = {}) {
  if (model == OrderModel::Exhaustive && instance.n() > options.exhaustive_cap) {
    throw Error(ErrorCode::TooLarge, "exhaustive order search is capped at n = " +
                                         std::to_string(options.exhaustive_cap));
  }
  return run_blocked_trials(trials, seed, options.threads, [&](std::uint64_t, RandomStream& rng) {
    const SplitSample split = sample_split(instance, rng);
    ArrivalOrder order;
    switch (model) {
      case OrderModel::Random:
        order = sample_order(split, rng);
        break;
      case OrderModel::IncreasingUnseen:
        order = increasing_unseen_first(instance, split);
        break;
      case OrderModel::EpsZero:
        order = eps_zero_order(instance, split);
        break;
      case OrderModel::Exhaustive:
        order = worst_order_value(instance, split, spec, options.limits, options.exhaustive_cap).order;
        break;
    }
    const TrialOutcome outcome = run_policy(spec, instance, split, order, rng);
    return std::pair{outcome.profit, outcome.opt_value};
  });
}

enum class DistKind { Uniform01, Exponential, Pareto };

struct DistSpec {
  DistKind kind = DistKind::Uniform01;
  double parameter = 1.0;  // Exponential: rate; Pareto: shape (scale 1)

  void validate() const {
    if (kind == DistKind::Exponential && !(parameter > 0.0 && std::isfinite(parameter))) {
      throw Error(ErrorCode::InvalidDist, "exponential rate must be positive");
    }
    if (kind == DistKind::Pareto && !(parameter > 1.0 && std::isfinite(parameter))) {
      throw Error(ErrorCode::InvalidDist, "pareto shape must exceed 1");
    }
  }

  double draw(RandomStream& rng) const {
    if (kind == DistKind::Uniform01) return rng.uniform01();
    const double u = 1.0 - rng.uniform01();  // in (0, 1]
    switch (kind) {
      case DistKind::Uniform01: break;
      case DistKind::Exponential: return -std::log(u) / parameter;
      case DistKind::Pareto: return std::pow(u, -1.0 / parameter);
    }
    return 0.0;
  }
};

inline std::string to_string(const DistSpec& dist) {
  switch (dist.kind) {
    case DistKind::Uniform01: return "uniform";
    case DistKind::Exponential: return "exponential";
    case DistKind::Pareto: return "pareto";
  }
  return "?";
}

inline DistSpec parse_dist(const std::string& name, double parameter) {
  DistSpec dist;
  if (name == "uniform") {
    dist.kind = DistKind::Uniform01;
  } else if (name == "exponential") {
    dist.kind = DistKind::Exponential;
  } else if (name == "pareto") {
    dist.kind = DistKind::Pareto;
  } else {
    throw Error(ErrorCode::InvalidDist, "unknown distribution '" + name + "'");
  }
  dist.parameter = parameter;
  dist.validate();
  return dist;
}

/// n+h i.i.d. draws per trial; a uniform h-subset is the training sample and
/// the rest arrives in uniform order.
inline RatioEstimate iid_prophet_trials(const DistSpec& dist, std::size_t n, std::size_t h,
                                        const PolicySpec& spec, std::uint64_t trials,
                                        std::uint64_t seed, const TrialOptions& options = {}) {
  dist.validate();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  return run_blocked_trials(trials, seed, options.threads, [&](std::uint64_t, RandomStream& rng) {
    std::vector<double> values(n + h);
    for (double& v : values) v = dist.draw(rng);
    const Instance instance = make_instance(std::move(values), h);
    const SplitSample split = sample_split(instance, rng);
    const ArrivalOrder order = sample_order(split, rng);
    const TrialOutcome outcome = run_policy(spec, instance, split, order, rng);
    return std::pair{outcome.profit, outcome.opt_value};
  });
}

/// Random-order ratio of `spec` on the epsilon/zero trade-off instance I1.
inline RatioEstimate tradeoff_experiment(std::size_t n, std::size_t h, const PolicySpec& spec,
                                         double epsilon, std::uint64_t trials, std::uint64_t seed,
                                         const TrialOptions& options = {}) {
  const Instance instance =
      eps_zero_instance(EpsZeroFamily::tradeoff(n, h, epsilon, EpsZeroVariant::I1));
  return run_trials(instance, spec, OrderModel::Random, trials, seed, options);
}

/// Values 2^(s i), i = 0..count-1, divided by the largest; s = 1 unless that
/// would underflow, in which case the exponent range is capped at 1000.
inline std::vector<double> geometric_profile(std::size_t count) {
  if (count == 0) return {};
  const double step = count > 1 ? std::min(1.0, 1000.0 / static_cast<double>(count - 1)) : 1.0;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::exp2(step * (static_cast<double>(i) - static_cast<double>(count - 1)));
  }
  return values;
}

struct CombinedCheck {
  RatioEstimate ros;
  RatioEstimate aos;
};

/// The partition-threshold policy with h = n(n-1): random-order ratio by
/// plain trials, adversarial ratio by scoring each sampled split with its
/// exact worst order.
inline CombinedCheck combined_policy_check(std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                           std::vector<double> values = {},
                                           const TrialOptions& options = {}) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  const std::size_t h = n * (n - 1);
  if (values.empty()) values = geometric_profile(n + h);
  if (values.size() != n + h) {
    throw Error(ErrorCode::InvalidArgument, "combined check needs n + n(n-1) values");
  }
  if (n > std::min<std::size_t>(options.exhaustive_cap, 5)) {
    throw Error(ErrorCode::TooLarge, "adversarial side is limited to n <= 5");
  }
  const Instance instance = make_instance(std::move(values), h);
  const PolicySpec spec{PolicyKind::Combined, std::nullopt, false};
  if (estimated_leaves(instance, spec) > static_cast<long double>(options.budget)) {
    throw Error(ErrorCode::BudgetExceeded, "worst-order table for n = " + std::to_string(n) +
                                               " exceeds the leaf budget");
  }
  CombinedCheck result;
  result.ros = run_trials(instance, spec, OrderModel::Random, trials, seed, options);
  // Every split's worst-order value is computed once; trials then sample splits.
  const std::uint64_t splits = *binomial(instance.size(), h);
  std::vector<double> worst(splits);
  parallel_for(splits, options.threads == 0 ? threads_from_env() : options.threads,
               [&](std::size_t s) {
                 std::vector<std::size_t> history;
                 unrank_combination(instance.size(), h, s, history);
                 const SplitSample split = make_split(instance, std::move(history));
                 worst[s] = worst_order_value(instance, split, spec, options.limits,
                                              options.exhaustive_cap)
                                .expected_profit;
               });
  result.aos = run_blocked_trials(trials, seed, options.threads,
                                  [&](std::uint64_t, RandomStream& rng) {
                                    const SplitSample split = sample_split(instance, rng);
                                    const std::uint64_t s = rank_combination(instance.size(), split.history);
                                    return std::pair{worst[s], opt_value(instance, split)};
                                  });
  return result;
}

}  // namespace secretary
