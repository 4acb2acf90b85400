#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>

namespace mac {

/// SplitMix64 finalizer. Used to whiten seeds and to derive child streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for job `key` of a run seeded with `master`. Jobs keyed this way
/// draw from disjoint streams no matter which worker executes them.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
  return splitmix64(master ^ splitmix64(key + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> keys) {
  for (auto k : keys) master = derive_seed(master, k);
  return master;
}

// Seedable generator whose output is identical on every platform. The
// engine is mt19937_64 (its sequence is fixed by the standard); the
// distributions below are written out by hand because the standard library
// ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi); never returns hi.
  double uniform(double lo, double hi) {
    double x = lo + (hi - lo) * uniform();
    if (x >= hi) x = std::nextafter(hi, lo);
    return x < lo ? lo : x;
  }

  bool bernoulli(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform() < p;
  }

  /// Uniform integer in [0, n) by rejection, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mac
