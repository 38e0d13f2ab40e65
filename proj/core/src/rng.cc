#include "pairlabel/rng.h"

#include <cmath>
#include <numbers>

#include "pairlabel/errors.h"

namespace pairlabel {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(Mix(seed ^ Mix(stream + kGamma))) {}

std::uint64_t Rng::NextU64() {
  ++counter_;
  return Mix(key_ + counter_ * kGamma);
}

double Rng::Uniform01() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::UniformBelow(std::uint64_t n) {
  if (n == 0) throw ParameterError("UniformBelow requires n > 0");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit && limit != 0);
  return x % n;
}

bool Rng::Bernoulli(double p) { return Uniform01() < p; }

Sign Rng::CoinFlip() { return (NextU64() >> 63) ? Sign::kPlus : Sign::kMinus; }

double Rng::Normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u1;
  do {
    u1 = Uniform01();
  } while (u1 == 0.0);
  const double u2 = Uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_normal_ = true;
  return r * std::cos(theta);
}

Rng Rng::Fork(std::uint64_t stream) const {
  return Rng(Mix(key_ ^ Mix(stream)), stream);
}

}  // namespace pairlabel
