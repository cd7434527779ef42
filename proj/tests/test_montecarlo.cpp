#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "secretary/bounds.hpp"
#include "secretary/montecarlo.hpp"
#include "secretary/oracle.hpp"

using namespace secretary;

namespace {

const PolicySpec kAlg1{PolicyKind::AosShort, std::nullopt, false};
const PolicySpec kAlg2{PolicyKind::AosLong, std::nullopt, false};
const PolicySpec kAlg3{PolicyKind::Ros, std::nullopt, false};
const PolicySpec kNever{PolicyKind::Never, std::nullopt, false};

void expect_same(const RatioEstimate& a, const RatioEstimate& b) {
  EXPECT_EQ(a.mean_alg, b.mean_alg);
  EXPECT_EQ(a.mean_opt, b.mean_opt);
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_EQ(a.alg_std_err, b.alg_std_err);
  EXPECT_EQ(a.ratio_std_err, b.ratio_std_err);
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_EQ(a.seed, b.seed);
}

TrialOptions with_threads(std::size_t threads) {
  TrialOptions options;
  options.threads = threads;
  return options;
}

}  // namespace

TEST(RunTrials, SameSeedSameEstimateForAnyThreadCount) {
  const Instance inst = make_instance({5, 1, 4, 2, 8, 3, 7}, 3);
  for (OrderModel model : {OrderModel::Random, OrderModel::IncreasingUnseen}) {
    const RatioEstimate one = run_trials(inst, kAlg3, model, 20000, 77, with_threads(1));
    const RatioEstimate three = run_trials(inst, kAlg3, model, 20000, 77, with_threads(3));
    const RatioEstimate eight = run_trials(inst, kAlg3, model, 20000, 77, with_threads(8));
    expect_same(one, three);
    expect_same(one, eight);
  }
  const RatioEstimate other = run_trials(inst, kAlg3, OrderModel::Random, 20000, 78);
  EXPECT_NE(other.mean_alg, run_trials(inst, kAlg3, OrderModel::Random, 20000, 77).mean_alg);
}

TEST(RunTrials, RejectsZeroTrials) {
  const Instance inst = make_instance({1, 2}, 1);
  EXPECT_THROW(run_trials(inst, kAlg1, OrderModel::Random, 0, 1), Error);
}

TEST(RunTrials, ThreadsFromEnvironment) {
  ::setenv("SECRETARY_THREADS", "3", 1);
  EXPECT_EQ(threads_from_env(), 3u);
  ::setenv("SECRETARY_THREADS", "zero", 1);
  EXPECT_EQ(threads_from_env(), default_threads());
  ::unsetenv("SECRETARY_THREADS");
  EXPECT_GE(threads_from_env(), 1u);
}

TEST(RunTrials, AgreesWithExactValues) {
  struct Probe {
    std::vector<double> values;
    std::size_t h;
    PolicySpec spec;
  };
  const std::vector<Probe> probes{
      {{3, 2, 1}, 1, {PolicyKind::Ros, 0, false}},
      {{3, 2, 1}, 1, kAlg1},
      {{9, 4, 7, 1, 3, 8}, 2, kAlg3},
      {{9, 4, 7, 1, 3, 8}, 3, kAlg2},
      {{2, 2, 5, 1, 5, 0, 3}, 4, kAlg3},
      {{1, 2, 3, 4, 5, 6, 7, 8}, 2, kAlg1},
  };
  for (const Probe& p : probes) {
    const Instance inst = make_instance(p.values, p.h);
    const RatioEstimate ro = run_trials(inst, p.spec, OrderModel::Random, 100000, 5);
    const ExactResult exact_ro = exact_ros(inst, p.spec);
    EXPECT_LE(std::abs(ro.mean_alg - exact_ro.expected_alg), 5 * ro.alg_std_err);
    EXPECT_LE(std::abs(ro.ratio - exact_ro.ratio), 5 * ro.ratio_std_err);

    const RatioEstimate inc = run_trials(inst, p.spec, OrderModel::IncreasingUnseen, 100000, 6);
    const ExactResult exact_inc =
        exact_fixed_adversary(inst, p.spec, AdversaryOrderKind::IncreasingUnseenFirst);
    EXPECT_LE(std::abs(inc.mean_alg - exact_inc.expected_alg), 5 * inc.alg_std_err);

    if (inst.n() <= 4) {
      const RatioEstimate worst = run_trials(inst, p.spec, OrderModel::Exhaustive, 5000, 7);
      const ExactResult exact_worst = exact_aos(inst, p.spec);
      EXPECT_LE(std::abs(worst.mean_alg - exact_worst.expected_alg),
                5 * worst.alg_std_err + 1e-12);
    }
  }
}

TEST(RunTrials, NeverPolicyEarnsNothing) {
  const Instance inst = make_instance({4, 3, 2, 1}, 2);
  const RatioEstimate est = run_trials(inst, kNever, OrderModel::Random, 5000, 1);
  EXPECT_EQ(est.ratio, 0.0);
  EXPECT_EQ(est.mean_alg, 0.0);
  EXPECT_GT(est.mean_opt, 0.0);
  EXPECT_EQ(tradeoff_experiment(20, 20, kNever, 0.01, 2000, 3).ratio, 0.0);
}

TEST(RunTrials, EpsZeroOrderOnlyForEpsZeroInstances) {
  const Instance inst = make_instance({4, 3, 2, 1}, 2);
  EXPECT_THROW(run_trials(inst, kAlg1, OrderModel::EpsZero, 10, 1), Error);
  const Instance eps = eps_zero_instance({3, 3, 0.1, EpsZeroVariant::I2, 3});
  EXPECT_NO_THROW(run_trials(eps, kAlg2, OrderModel::EpsZero, 10, 1));
}

TEST(OrderModel, NamesRoundTrip) {
  for (OrderModel m : {OrderModel::Random, OrderModel::IncreasingUnseen, OrderModel::EpsZero,
                       OrderModel::Exhaustive}) {
    EXPECT_EQ(parse_order_model(to_string(m)), m);
  }
  EXPECT_EQ(to_string(OrderModel::IncreasingUnseen), "increasing-unseen");
  EXPECT_THROW(parse_order_model("sorted"), Error);
}

TEST(Dist, ParsingAndValidation) {
  auto code_of = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of([] { parse_dist("exponential", 0.0); }), ErrorCode::InvalidDist);
  EXPECT_EQ(code_of([] { parse_dist("pareto", 1.0); }), ErrorCode::InvalidDist);
  EXPECT_EQ(code_of([] { parse_dist("normal", 1.0); }), ErrorCode::InvalidDist);
  EXPECT_EQ(code_of([] { iid_prophet_trials({DistKind::Pareto, 0.5}, 3, 0, kAlg1, 10, 1); }),
            ErrorCode::InvalidDist);
  EXPECT_EQ(parse_dist("pareto", 2.5).parameter, 2.5);
  EXPECT_EQ(to_string(parse_dist("uniform", 0.0)), "uniform");
}

TEST(Dist, SampleMeans) {
  const std::vector<std::pair<DistSpec, double>> cases{
      {{DistKind::Uniform01, 1.0}, 0.5},
      {{DistKind::Exponential, 2.0}, 0.5},
      {{DistKind::Pareto, 3.0}, 1.5},
  };
  for (const auto& [dist, mean] : cases) {
    RandomStream rng(12, static_cast<std::uint64_t>(dist.kind));
    double sum = 0.0;
    const int draws = 400000;
    for (int i = 0; i < draws; ++i) {
      const double x = dist.draw(rng);
      ASSERT_GE(x, 0.0);
      sum += x;
    }
    EXPECT_NEAR(sum / draws, mean, 0.01) << to_string(dist);
  }
}

TEST(IidProphet, SingleCandidateAlwaysTaken) {
  for (const DistSpec& dist : {DistSpec{DistKind::Uniform01, 1.0},
                               DistSpec{DistKind::Exponential, 1.0},
                               DistSpec{DistKind::Pareto, 2.0}}) {
    for (const PolicySpec& spec : {kAlg1, kAlg3}) {
      EXPECT_EQ(iid_prophet_trials(dist, 1, 0, spec, 3000, 4).ratio, 1.0);
    }
  }
}

TEST(IidProphet, RandomOrderBoundTransfers) {
  for (const DistSpec& dist : {DistSpec{DistKind::Uniform01, 1.0},
                               DistSpec{DistKind::Exponential, 1.0},
                               DistSpec{DistKind::Pareto, 2.5}}) {
    for (auto [n, h] : {std::pair<std::size_t, std::size_t>{5, 0}, {5, 5}, {10, 3}, {10, 20}}) {
      const RatioEstimate est = iid_prophet_trials(dist, n, h, kAlg3, 40000, 9);
      EXPECT_GE(est.ratio, ros_lower(n, h) - 5 * est.ratio_std_err)
          << to_string(dist) << " n=" << n << " h=" << h;
    }
  }
}

TEST(GeometricProfile, ShapeAndCap) {
  const std::vector<double> v = geometric_profile(5);
  EXPECT_EQ(v, (std::vector<double>{1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0}));
  EXPECT_TRUE(geometric_profile(0).empty());
  EXPECT_EQ(geometric_profile(1), std::vector<double>{1.0});
  const std::vector<double> wide = geometric_profile(4001);
  EXPECT_EQ(wide.back(), 1.0);
  EXPECT_GT(wide.front(), 0.0);
  for (std::size_t i = 1; i < wide.size(); ++i) ASSERT_LT(wide[i - 1], wide[i]);
}

TEST(CombinedCheck, TrivialSingleCandidate) {
  const CombinedCheck c = combined_policy_check(1, 1000, 3);
  EXPECT_EQ(c.ros.ratio, 1.0);
  EXPECT_EQ(c.aos.ratio, 1.0);
}

TEST(CombinedCheck, MatchesExactValuesAtThree) {
  const std::vector<double> values{9, 1, 8, 2, 7, 3, 6, 4, 5};
  const CombinedCheck c = combined_policy_check(3, 30000, 21, values);
  const Instance inst = make_instance(values, 6);
  const PolicySpec combined{PolicyKind::Combined, std::nullopt, false};
  const ExactResult ro = exact_ros(inst, combined);
  const ExactResult ao = exact_aos(inst, combined);
  EXPECT_LE(std::abs(c.ros.mean_alg - ro.expected_alg), 5 * c.ros.alg_std_err);
  EXPECT_LE(std::abs(c.aos.mean_alg - ao.expected_alg), 5 * c.aos.alg_std_err);
  EXPECT_GE(ro.ratio, 1.0 - std::pow(2.0 / 3.0, 3.0) - 1e-12);
  EXPECT_GE(ao.ratio, 4.0 / 9.0 - 1e-12);
}

TEST(CombinedCheck, SizeLimits) {
  EXPECT_THROW(
      {
        try {
          combined_policy_check(4, 10, 1);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
          throw;
        }
      },
      Error);
  EXPECT_THROW(combined_policy_check(6, 10, 1), Error);
  EXPECT_THROW(combined_policy_check(3, 10, 1, {1, 2, 3}), Error);
}
