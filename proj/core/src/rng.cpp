#include "d2p/rng.hpp"

#include <cmath>
#include <numbers>

#include "d2p/errors.hpp"

namespace d2p {

namespace {

std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RngSeed derive_seed(RngSeed base, std::uint64_t tag) {
  // Two mix rounds over (seed, tag) so that nearby tags land far apart.
  std::uint64_t s = base.value ^ (0xA0761D6478BD642Full * (tag + 1));
  splitmix64_step(s);
  return RngSeed{splitmix64_step(s)};
}

std::uint64_t Rng::next_u64() { return splitmix64_step(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw DomainError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

double Rng::normal() {
  // Box-Muller; u1 nudged away from 0 so log stays finite.
  double u1 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::normal(double mean, double sigma) { return mean + sigma * normal(); }

double Rng::truncated_normal(double mean, double sigma, double lo, double hi) {
  if (lo >= hi) throw DomainError("truncated_normal: empty interval");
  for (int i = 0; i < 1000; ++i) {
    const double x = normal(mean, sigma);
    if (x >= lo && x <= hi) return x;
  }
  // Interval far in the tail; clamp rather than spin forever.
  return mean < lo ? lo : hi;
}

int Rng::poisson(double mean) {
  if (mean < 0.0) throw DomainError("poisson: negative mean");
  if (mean == 0.0) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double product = uniform();
  while (product > limit) {
    ++k;
    product *= uniform();
  }
  return k;
}

}  // namespace d2p
