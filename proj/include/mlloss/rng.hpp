#ifndef MLLOSS_RNG_HPP_
#define MLLOSS_RNG_HPP_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace mlloss {

// Seedable deterministic generator: xoshiro256++ seeded through splitmix64.
// Identical seed gives a bit-identical stream on every platform. Named
// sub-streams come from split(), which derives a child seed from the parent
// seed and a label hash, so substreams do not depend on draw order.
//
// Single-owner mutable state: one Rng per thread of work.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (pairs cached).
  double normal();

  // Uniform integer in [0, n), rejection-sampled to remove modulo bias.
  std::size_t index(std::size_t n);

  // Child stream keyed by label; independent of how many draws the parent
  // has made.
  Rng split(std::string_view label) const;

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace mlloss

#endif  // MLLOSS_RNG_HPP_
