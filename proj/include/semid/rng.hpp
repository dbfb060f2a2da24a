#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace semid {

// All randomness in the library flows through this generator so that a 64-bit
// seed pins down every experiment. The integer pipeline (next_u64, below) is
// bit-portable across platforms; the real-valued samplers additionally depend
// on the platform's libm rounding, which is identical on common IEEE-754
// toolchains.
//
// Algorithms, by their published constants:
//   - seeding / stream derivation: splitmix64
//       (increment 0x9E3779B97F4A7C15, mix multipliers 0xBF58476D1CE4E5B9
//        and 0x94D049BB133111EB)
//   - generation: xoshiro256++ (rotl(s0+s3, 23) + s0 output, shift 17,
//        rotations 23/45)
//   - normal: Box-Muller, one variate per two draws
//   - gamma: Marsaglia-Tsang squeeze, with the alpha < 1 boost
//   - geometric / discrete draws: CDF inversion

// splitmix64 output mix; a bijection on 64-bit values.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Stream labels used with Rng::derive so that independent consumers of one
// master seed never share a stream.
namespace stream {
inline constexpr std::uint64_t kSynthUser = 1;
inline constexpr std::uint64_t kPartition = 2;
inline constexpr std::uint64_t kBaseline = 3;
inline constexpr std::uint64_t kDefense = 4;
inline constexpr std::uint64_t kSample = 5;
inline constexpr std::uint64_t kNegativePairs = 6;
inline constexpr std::uint64_t kTrain = 7;
inline constexpr std::uint64_t kShuffle = 8;
}  // namespace stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
    // all-zero state is the one invalid xoshiro state
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  // Deterministic sub-stream: mixes each path component into the seed.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0,n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  // Standard normal via Box-Muller (cosine branch only).
  double normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Gamma(alpha, 1) via Marsaglia-Tsang; alpha > 0.
  double gamma(double alpha) {
    if (alpha < 1.0) {
      const double u = uniform();
      return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Symmetric Dirichlet(alpha) over out.size() components.
  void dirichlet(double alpha, std::span<double> out) {
    double total = 0.0;
    for (auto& value : out) {
      value = gamma(alpha);
      total += value;
    }
    for (auto& value : out) value /= total;
  }

  // Geometric on {1,2,...} with the given mean (>= 1), via inversion.
  std::uint64_t geometric(double mean) {
    if (mean <= 1.0) return 1;
    const double p = 1.0 / mean;
    const double u = uniform();
    const double draw = 1.0 + std::floor(std::log1p(-u) / std::log1p(-p));
    return draw < 1.0 ? 1 : static_cast<std::uint64_t>(draw);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t s_[4];
};

// Seed for the sub-stream named by path. Distinct paths give independent
// streams with overwhelming probability.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed + kGolden);
  for (std::uint64_t v : path) h = mix64(h ^ mix64(v + kGolden));
  return h;
}

inline Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(seed, path));
}

}  // namespace semid
