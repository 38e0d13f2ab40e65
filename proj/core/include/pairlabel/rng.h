#ifndef PAIRLABEL_RNG_H_
#define PAIRLABEL_RNG_H_

#include <cstdint>
#include <limits>
#include <span>
#include <utility>

#include "pairlabel/types.h"

namespace pairlabel {

// Counter-based generator. Output i of a stream is
//
//   mix(key + i * 0x9E3779B97F4A7C15),   i = 1, 2, ...
//
// where mix is the SplitMix64 finalizer and
// key = mix(seed ^ mix(stream + 0x9E3779B97F4A7C15)).
// The stream is therefore fully determined by (seed, stream, counter), and
// every sampling routine below is defined here rather than through
// <random> distributions, whose output is implementation-defined.
//
// Trials derive their seed as base_seed + trial_index (see TrialSeed), and
// subsystems inside a trial use Fork() with a fixed stream id.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr std::uint64_t TrialSeed(std::uint64_t base_seed,
                                           std::uint64_t trial_index) {
    return base_seed + trial_index;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();
  // Uniform integer on [0, n); n must be positive. Unbiased (rejection).
  std::uint64_t UniformBelow(std::uint64_t n);
  bool Bernoulli(double p);
  Sign CoinFlip();
  // Standard normal via the Box-Muller transform.
  double Normal();

  // Generator with seed mix(key ^ mix(stream)) on `stream`, independent of
  // this one. Does not advance this generator.
  Rng Fork(std::uint64_t stream) const;

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = UniformBelow(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Stream ids used inside a trial.
namespace streams {
inline constexpr std::uint64_t kData = 1;
inline constexpr std::uint64_t kSplit = 2;
inline constexpr std::uint64_t kOracle = 3;
inline constexpr std::uint64_t kAlgorithm = 4;
}  // namespace streams

}  // namespace pairlabel

#endif  // PAIRLABEL_RNG_H_
