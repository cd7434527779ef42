#pragma once

// Counter-based random streams and the sampling primitives built on them.
//
// A RandomStream is identified by (seed, stream_id). Draws are produced by
// the Philox4x32-10 block cipher applied to an incrementing 64-bit block
// counter, keyed by the seed; the stream id occupies the upper half of the
// counter, so distinct stream ids never share a block. Trial t of an
// experiment uses stream_id = t, which makes results independent of how the
// trials are scheduled across threads.

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace secretary {

namespace detail {

__extension__ using uint128 = unsigned __int128;

inline constexpr std::array<std::uint32_t, 4> philox4x32_10(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kBump0 = 0x9E3779B9u;
  constexpr std::uint32_t kBump1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kBump0;
      key[1] += kBump1;
    }
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

}  // namespace detail

class RandomStream {
 public:
  constexpr RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id) {}

  [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] constexpr std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Next raw 64-bit draw.
  std::uint64_t next_u64() noexcept {
    if (buffered_ == 0) refill();
    return buffer_[--buffered_];
  }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept {
    // Lemire's multiply-and-reject; exact for every bound.
    detail::uint128 m = static_cast<detail::uint128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<detail::uint128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform k-subset of {0, ..., n-1} written to `out` (unordered).
  /// Floyd's algorithm: k draws regardless of n.
  void choose_subset(std::size_t n, std::size_t k, std::vector<std::size_t>& out);

 private:
  void refill() noexcept {
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                           static_cast<std::uint32_t>(seed_ >> 32)};
    const auto r = detail::philox4x32_10(ctr, key);
    ++block_;
    // Served back to front by next_u64.
    buffer_[1] = (std::uint64_t{r[1]} << 32) | r[0];
    buffer_[0] = (std::uint64_t{r[3]} << 32) | r[2];
    buffered_ = 2;
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

inline void RandomStream::choose_subset(std::size_t n, std::size_t k,
                                        std::vector<std::size_t>& out) {
  out.clear();
  if (k == 0) return;
  thread_local std::vector<std::uint8_t> taken;
  if (taken.size() < n) taken.resize(n, 0);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::size_t>(uniform_index(j + 1));
    const std::size_t pick = taken[t] ? j : t;
    taken[pick] = 1;
    out.push_back(pick);
  }
  for (std::size_t i : out) taken[i] = 0;
}

/// In-place uniform shuffle (Fisher-Yates).
template <typename T>
void shuffle(std::span<T> items, RandomStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

/// Moves a uniform `k`-subset of `items` to its front (partial Fisher-Yates).
template <typename T>
void partial_shuffle(std::span<T> items, std::size_t k, RandomStream& rng) {
  for (std::size_t i = 0; i < k && i + 1 < items.size(); ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(items.size() - i));
    using std::swap;
    swap(items[i], items[j]);
  }
}

}  // namespace secretary
