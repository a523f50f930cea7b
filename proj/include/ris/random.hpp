#ifndef RIS_RANDOM_HPP
#define RIS_RANDOM_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace ris {

/**
 * Counter-based random stream (Philox4x32-10).
 *
 * The 64-bit seed is the cipher key; the stream id occupies the upper half of
 * the 128-bit counter and the block index the lower half. Two streams with the
 * same (seed, stream_id) produce bit-identical sequences, and distinct stream
 * ids address disjoint counter ranges. Satisfies UniformRandomBitGenerator.
 */
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

  /// Standard normal (Box-Muller, second variate cached).
  double normal() noexcept;

  /// Independent child stream addressed by `tag`; does not advance this stream.
  RandomStream substream(std::uint64_t tag) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer, used for deriving stream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace ris

#endif  // RIS_RANDOM_HPP
