#pragma once

// Closed-form competitive-ratio bounds for the sampled secretary problem,
// the sampling-phase schedule of the random-order policy, the constants r and
// 1/beta, and the per-round profit predictor of the random-order policy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "secretary/core.hpp"

namespace secretary {

namespace detail {

inline void require_positive_n(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
}

inline double bisect_root(auto f, double lo, double hi, double width) {
  auto tol = [width](double a, double b) { return std::abs(b - a) <= width; };
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol);
  return 0.5 * (a + b);
}

}  // namespace detail

/// Guarantee of the adversarial-order policies: h/(n+h-1) while h <= n-1,
/// 1/2 once the history can seed a threshold set of size n-1 with room to spare.
inline double aos_lower(std::size_t n, std::size_t h) {
  detail::require_positive_n(n);
  if (h == 0) return 0.0;
  if (h <= n - 1) return static_cast<double>(h) / static_cast<double>(n + h - 1);
  return 0.5;
}

/// Upper bound on any adversarial-order policy. For h = 0 only the
/// (1/2) 2^n/(2^n-1) term is returned.
inline double aos_upper(std::size_t n, std::size_t h) {
  detail::require_positive_n(n);
  // (1/2) 2^n / (2^n - 1) == 0.5 / (1 - 2^-n); stays finite for large n.
  const double half_term = 0.5 / (1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 2000))));
  if (h == 0) return half_term;
  const double short_term = static_cast<double>(h) / static_cast<double>(n + h - 1);
  return std::min(short_term, half_term);
}

struct QSchedule {
  double q = 0.0;
  std::size_t q_rounds = 0;
};

/// Sampling fraction q = max(e^{-e^{-h/n}} - h/n, 0); the policy skips the
/// first floor(q n) rounds.
inline QSchedule q_schedule(std::size_t n, std::size_t h) {
  detail::require_positive_n(n);
  const double x = static_cast<double>(h) / static_cast<double>(n);
  const double q = std::max(std::exp(-std::exp(-x)) - x, 0.0);
  auto rounds = static_cast<std::size_t>(std::floor(q * static_cast<double>(n)));
  return {q, std::min(rounds, n)};
}

/// Root of e^{-e^{-x}} - x on [0, 1] (about 0.567).
inline double r_constant() {
  static const double r = detail::bisect_root(
      [](double x) { return std::exp(-std::exp(-x)) - x; }, 0.0, 1.0, 1e-13);
  return r;
}

/// Integral over (0, 1] of 1 / (y (1 - ln y) + beta - 1).
inline double hill_kertz_integral(double beta) {
  const double shift = beta - 1.0;
  auto integrand = [shift](double y) {
    // y (1 - ln y) -> 0 as y -> 0+.
    if (y <= 0.0) return 1.0 / shift;
    return 1.0 / (y * (1.0 - std::log(y)) + shift);
  };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 20,
                                                                       1e-13, &error);
}

/// beta solving hill_kertz_integral(beta) = 1 (about 1.3415).
inline double hill_kertz_beta() {
  static const double beta = detail::bisect_root(
      [](double b) { return hill_kertz_integral(b) - 1.0; }, 1.01, 2.0, 1e-12);
  return beta;
}

/// 1/beta, about 0.745.
inline double hill_kertz_ratio() { return 1.0 / hill_kertz_beta(); }

/// Guarantee c(h, n) of the random-order policy (1 - (1-1/n)^n once h >= n).
inline double ros_lower(std::size_t n, std::size_t h) {
  detail::require_positive_n(n);
  const double nn = static_cast<double>(n);
  const double x = static_cast<double>(h) / nn;
  if (h >= n) return 1.0 - std::pow(1.0 - 1.0 / nn, nn);
  if (x <= r_constant()) return std::exp(-std::exp(-x));
  return x * (1.0 - std::log(x) - std::exp(-x));
}

/// Upper bound for any random-order policy: the rank-based secretary bound
/// with h forced rejections, capped by 1/beta and by 1.
///
/// The 1/beta cap is the limiting i.i.d. prophet constant. It is not applied
/// for n <= 2, where the random-order policy provably beats it
/// (ros_lower(2, 2) = 0.75).
inline double ros_upper(std::size_t n, std::size_t h) {
  detail::require_positive_n(n);
  const double nn = static_cast<double>(n);
  const double hh = static_cast<double>(h);
  double bound;
  if (hh / (nn + hh) <= 1.0 / std::numbers::e) {
    bound = (1.0 / std::numbers::e) * (nn + hh) / nn + 1.0 / nn;
  } else {
    bound = (hh / nn) * std::log((hh + nn) / hh) + 1.0 / nn;
  }
  if (n >= 3) bound = std::min(bound, hill_kertz_ratio());
  return std::min(bound, 1.0);
}

/// Probability that the random-order policy reaches round `round` without
/// having accepted, given q_rounds skipped rounds. Exact for every instance.
inline double ros_reach_probability(std::size_t n, std::size_t h, std::size_t q_rounds,
                                    std::size_t round) {
  const double nn = static_cast<double>(n);
  if (round <= q_rounds + 1) return 1.0;
  const std::size_t phase1_end = n > h ? n - h : 0;  // last round with h + round <= n
  const std::size_t last_quiet = std::max(q_rounds, phase1_end);
  if (round - 1 <= phase1_end) {
    // Still within (or just after) phase 1: the best of the first h+round-1
    // observed candidates was among the first h+q_rounds.
    return static_cast<double>(h + q_rounds) / static_cast<double>(h + round - 1);
  }
  // Phase 2 rejects with probability exactly 1 - 1/n per round.
  const double entry = q_rounds >= phase1_end ? 1.0 : static_cast<double>(h + q_rounds) / nn;
  return entry * std::pow(1.0 - 1.0 / nn, static_cast<double>(round - 1 - last_quiet));
}

/// Expected profit of the random-order policy in round `round` as a fraction
/// of E[OPT]: zero while sampling, (h+q)/(h+round-1) / n in phase 1,
/// reach / n in phase 2 (which covers the h >= n case from round 1).
///
/// The phase-1 value uses E[max of a random (h+round)-subset] >=
/// (h+round)/n E[OPT], so it is a lower bound there, exact when h + round = n.
/// Phase-2 values are exact.
inline double analytic_round_profit(std::size_t n, std::size_t h, std::size_t q_rounds,
                                    std::size_t round) {
  detail::require_positive_n(n);
  if (round < 1 || round > n || q_rounds > n) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= round <= n and q_rounds <= n");
  }
  if (round <= q_rounds) return 0.0;
  return ros_reach_probability(n, h, q_rounds, round) / static_cast<double>(n);
}

/// Sum of analytic_round_profit over all rounds, by direct summation.
inline double analytic_total(std::size_t n, std::size_t h, std::size_t q_rounds) {
  double total = 0.0;
  for (std::size_t round = 1; round <= n; ++round) {
    total += analytic_round_profit(n, h, q_rounds, round);
  }
  return total;
}

struct BoundReport {
  std::size_t n = 0;
  std::size_t h = 0;
  double aos_lower = 0.0;
  double aos_upper = 0.0;
  double ros_lower = 0.0;
  double ros_upper = 0.0;
  double q = 0.0;
  std::size_t q_rounds = 0;
};

inline BoundReport bound_report(std::size_t n, std::size_t h) {
  const QSchedule qs = q_schedule(n, h);
  return {n, h, aos_lower(n, h), aos_upper(n, h), ros_lower(n, h), ros_upper(n, h), qs.q,
          qs.q_rounds};
}

}  // namespace secretary
