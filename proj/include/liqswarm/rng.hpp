#pragma once

#include <cstdint>
#include <initializer_list>

namespace liqswarm {

/// SplitMix64 (Steele, Lea & Flood). Used for seeding and for deriving
/// independent stream seeds from a master seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman & Vigna). The generator behind every random
/// draw in a simulation; its name is written into run metadata and changing
/// it is a breaking change for recorded outputs.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "xoshiro256** (streams derived via splitmix64)";

  explicit Rng(std::uint64_t seed);
  /// Raw state constructor, for reference vectors.
  Rng(std::uint64_t s0, std::uint64_t s1, std::uint64_t s2, std::uint64_t s3);

  std::uint64_t next();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on [0, n). n must be positive. Lemire's method with rejection.
  std::uint64_t below(std::uint64_t n);
  /// Uniform on the closed interval [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t s_[4];
};

/// Stream tags for the seed hierarchy master -> episode -> agent.
enum class Stream : std::uint64_t {
  Assignment = 1,
  Balance = 2,
  Pairing = 3,
  Action = 4,
};

/// Folds a path of identifiers into a stream seed. Distinct paths give
/// statistically independent streams; the mapping is fixed.
std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                          std::initializer_list<std::uint64_t> path);

inline Rng make_stream(std::uint64_t master, Stream stream,
                       std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(master, stream, path));
}

}  // namespace liqswarm
