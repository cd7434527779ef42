#pragma once

// Exhaustive enumeration of a policy's internal randomness.
//
// A run is replayed from a recorded prefix of subset choices; the first time
// the run asks for a choice beyond the prefix, alternative 0 is taken and the
// number of alternatives C(N, k) is recorded. After each complete run the
// choice path is advanced like an odometer, so every leaf of the choice tree
// is visited exactly once with weight prod 1/C(N_i, k_i).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "secretary/combinatorics.hpp"
#include "secretary/core.hpp"

namespace secretary {

struct EnumerationLimits {
  // Cap on internal-randomness leaves for a single (split, order) world.
  std::uint64_t max_leaves_per_world = 1'000'000;
};

class ReplayChoices {
 public:
  void choose_subset(std::size_t n, std::size_t k, std::vector<std::size_t>& out) {
    const auto arity = binomial(n, k);
    if (!arity || *arity == 0) {
      throw Error(ErrorCode::RandomnessNotEnumerable,
                  "C(" + std::to_string(n) + "," + std::to_string(k) + ") is not enumerable");
    }
    if (pos_ == path_.size()) {
      path_.push_back(0);
      arity_.push_back(*arity);
    }
    unrank_combination(n, k, path_[pos_], out);
    ++pos_;
  }

  /// Rewinds for the next replay; false once every path has been visited.
  bool advance() {
    path_.resize(pos_);
    arity_.resize(pos_);
    pos_ = 0;
    while (!path_.empty()) {
      if (path_.back() + 1 < arity_.back()) {
        ++path_.back();
        return true;
      }
      path_.pop_back();
      arity_.pop_back();
    }
    return false;
  }

  /// Probability of the path just replayed.
  [[nodiscard]] long double weight() const {
    long double w = 1.0L;
    for (std::size_t i = 0; i < pos_; ++i) w /= static_cast<long double>(arity_[i]);
    return w;
  }

 private:
  std::vector<std::uint64_t> path_;
  std::vector<std::uint64_t> arity_;
  std::size_t pos_ = 0;
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

/// Visits every internal-randomness leaf of `run` (a callable taking
/// ReplayChoices& and returning a TrialOutcome) as visit(outcome, weight).
/// Returns the number of leaves.
template <typename Run, typename Visit>
std::uint64_t enumerate_choices(Run&& run, Visit&& visit, const EnumerationLimits& limits) {
  ReplayChoices choices;
  std::uint64_t leaves = 0;
  do {
    if (++leaves > limits.max_leaves_per_world) {
      throw Error(ErrorCode::RandomnessNotEnumerable,
                  "more than " + std::to_string(limits.max_leaves_per_world) +
                      " internal-randomness outcomes");
    }
    const TrialOutcome outcome = run(choices);
    visit(outcome, choices.weight());
  } while (choices.advance());
  return leaves;
}

/// Runs f(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to per-index slots by the caller so merge order stays fixed.
template <typename F>
void parallel_for(std::size_t count, std::size_t threads, F&& f) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  threads = std::min(threads, count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace secretary
