#pragma once

#include <cstdint>

namespace d2p {

// Seed for every random draw in the pipeline. Identical seeds reproduce
// identical artifacts bit-for-bit, so all distributions below are hand-rolled
// rather than left to the (implementation-defined) std:: ones.
struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

// Derives an independent stream from a base seed. Used wherever one seed has
// to fan out (per episode, per frame, per model init) without the streams
// stepping on each other.
RngSeed derive_seed(RngSeed base, std::uint64_t tag);

// splitmix64 generator. Small state, full 64-bit output, portable.
class Rng {
 public:
  explicit Rng(RngSeed seed) : state_(seed.value) {}

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform();
  double uniform(double lo, double hi);

  // Uniform integer on [lo, hi], both ends inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller (no state cached between calls).
  double normal();
  double normal(double mean, double sigma);

  // Normal truncated to [lo, hi] by rejection.
  double truncated_normal(double mean, double sigma, double lo, double hi);

  // Poisson by Knuth's product method; fine for the small means used here.
  int poisson(double mean);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace d2p
