#pragma once

#include <cstdint>
#include <random>

namespace heterocut {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a base seed and tags. Used to give
/// parallel work items (images, pairs, solver starts) their own streams so
/// results do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b);

/// Deterministic random stream. Wraps std::mt19937_64 (the engine is fully
/// specified by the standard) with hand-rolled real-valued draws, so a given
/// seed yields the same sequence everywhere. std:: distributions are avoided
/// because their output is implementation-defined.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform on [0,1), 53-bit resolution.
  double next_double();
  double uniform(double lo, double hi);
  /// Uniform integer on [lo, hi], rejection-sampled (no modulo bias).
  int uniform_int(int lo, int hi);
  /// Standard normal via Marsaglia's polar method.
  double gaussian();

  /// Stream derived from this stream's seed and a tag; independent of any
  /// draws already made here.
  SeedStream substream(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Counter-style generator (SplitMix64 sequence). Cheap to construct, used
/// one-per-pair in dataset generation so every pair's draws are a pure
/// function of (seed, i, j).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double next_double();
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

}  // namespace heterocut
