#pragma once

// Data model shared by every module: an adversary's instance, the random
// history/online split, arrival orders and the per-trial outcome.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "secretary/random.hpp"

namespace secretary {

enum class ErrorCode {
  Empty,
  NegativeValue,
  SampleTooLarge,
  HistoryTooSmall,
  CalledAfterAccept,
  RoundSkew,
  BadShape,
  NotEpsZeroInstance,
  TooLarge,
  RandomnessNotEnumerable,
  BudgetExceeded,
  InvalidDist,
  InvalidArgument,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::HistoryTooSmall: return "HistoryTooSmall";
    case ErrorCode::CalledAfterAccept: return "CalledAfterAccept";
    case ErrorCode::RoundSkew: return "RoundSkew";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::NotEpsZeroInstance: return "NotEpsZeroInstance";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::RandomnessNotEnumerable: return "RandomnessNotEnumerable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidDist: return "InvalidDist";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A candidate as seen by a policy: its value plus the index used to break
/// ties. Among equal values the lower index ranks higher, so candidates are
/// totally ordered.
struct CandidateKey {
  double value = 0.0;
  std::size_t index = 0;

  friend constexpr bool operator==(const CandidateKey&, const CandidateKey&) = default;
  friend constexpr bool operator<(const CandidateKey& a, const CandidateKey& b) noexcept {
    if (a.value != b.value) return a.value < b.value;
    return a.index > b.index;
  }
  friend constexpr bool operator>(const CandidateKey& a, const CandidateKey& b) noexcept {
    return b < a;
  }
};

/// The adversary's candidate pool together with the sample size h.
class Instance {
 public:
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t h() const noexcept { return h_; }
  [[nodiscard]] std::size_t n() const noexcept { return values_.size() - h_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double value(std::size_t i) const { return values_.at(i); }
  [[nodiscard]] CandidateKey key(std::size_t i) const { return {values_.at(i), i}; }

  friend Instance make_instance(std::vector<double> values, std::size_t h);

 private:
  Instance(std::vector<double> values, std::size_t h) : values_(std::move(values)), h_(h) {}

  std::vector<double> values_;
  std::size_t h_;
};

inline Instance make_instance(std::vector<double> values, std::size_t h) {
  if (values.empty()) throw Error(ErrorCode::Empty, "instance needs at least one candidate");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NegativeValue, "values must be finite");
    if (v < 0.0) throw Error(ErrorCode::NegativeValue, "values must be non-negative");
  }
  if (h >= values.size()) {
    throw Error(ErrorCode::SampleTooLarge,
                "h = " + std::to_string(h) + " leaves no online candidate among " +
                    std::to_string(values.size()));
  }
  return Instance(std::move(values), h);
}

/// Partition of the candidate indices into history H (size h) and online O
/// (size n). Both index lists are kept sorted.
struct SplitSample {
  std::vector<std::size_t> history;
  std::vector<std::size_t> online;
};

/// Presentation order of the online candidates.
struct ArrivalOrder {
  std::vector<std::size_t> sequence;
};

struct TrialOutcome {
  std::optional<std::size_t> accepted;
  double profit = 0.0;
  std::optional<std::size_t> accept_round;  // 1-based
  double opt_value = 0.0;
};

/// Builds a split from an explicit history; the online set is the complement.
inline SplitSample make_split(const Instance& instance, std::vector<std::size_t> history) {
  std::sort(history.begin(), history.end());
  if (history.size() != instance.h() ||
      std::adjacent_find(history.begin(), history.end()) != history.end() ||
      (!history.empty() && history.back() >= instance.size())) {
    throw Error(ErrorCode::InvalidArgument, "history must list h distinct candidate indices");
  }
  SplitSample split;
  split.online.reserve(instance.n());
  for (std::size_t i = 0, j = 0; i < instance.size(); ++i) {
    if (j < history.size() && history[j] == i) {
      ++j;
    } else {
      split.online.push_back(i);
    }
  }
  split.history = std::move(history);
  return split;
}

/// Uniform h-subset of the candidates as history.
inline SplitSample sample_split(const Instance& instance, RandomStream& rng) {
  std::vector<std::size_t> idx(instance.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  partial_shuffle(std::span<std::size_t>(idx), instance.h(), rng);
  SplitSample split;
  split.history.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(instance.h()));
  split.online.assign(idx.begin() + static_cast<std::ptrdiff_t>(instance.h()), idx.end());
  std::sort(split.history.begin(), split.history.end());
  std::sort(split.online.begin(), split.online.end());
  return split;
}

/// Uniform permutation of the online set.
inline ArrivalOrder sample_order(const SplitSample& split, RandomStream& rng) {
  ArrivalOrder order{split.online};
  shuffle(std::span<std::size_t>(order.sequence), rng);
  return order;
}

/// Index of the best online candidate under the tie-broken order.
inline std::size_t best_online(const Instance& instance, const SplitSample& split) {
  if (split.online.empty()) throw Error(ErrorCode::Empty, "split has no online candidate");
  std::size_t best = split.online.front();
  for (std::size_t i : split.online) {
    if (instance.key(i) > instance.key(best)) best = i;
  }
  return best;
}

inline double opt_value(const Instance& instance, const SplitSample& split) {
  return instance.value(best_online(instance, split));
}

inline std::vector<CandidateKey> keys_of(const Instance& instance,
                                         std::span<const std::size_t> indices) {
  std::vector<CandidateKey> keys;
  keys.reserve(indices.size());
  for (std::size_t i : indices) keys.push_back(instance.key(i));
  return keys;
}

inline bool is_permutation_of(const ArrivalOrder& order, const SplitSample& split) {
  std::vector<std::size_t> seq = order.sequence;
  std::sort(seq.begin(), seq.end());
  return seq == split.online;
}

// {"values": [...], "h": k}
inline void to_json(nlohmann::json& j, const Instance& instance) {
  j = nlohmann::json{{"values", std::vector<double>(instance.values().begin(),
                                                    instance.values().end())},
                     {"h", instance.h()}};
}

inline Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("values") || !j.contains("h")) {
    throw Error(ErrorCode::InvalidArgument, "instance JSON needs \"values\" and \"h\"");
  }
  return make_instance(j.at("values").get<std::vector<double>>(), j.at("h").get<std::size_t>());
}

}  // namespace secretary
