#include "heterocut/rng.hpp"

#include <cmath>

namespace heterocut {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
  return mix64(h ^ mix64(tag + 0xD1B54A32D192ED03ULL));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b) {
  return derive_seed(derive_seed(seed, tag_a), tag_b);
}

SeedStream::SeedStream(std::uint64_t seed) : seed_(seed), gen_(mix64(seed)) {}

std::uint64_t SeedStream::next_u64() { return gen_(); }

double SeedStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeedStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

int SeedStream::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  const std::uint64_t reject_below = (-span) % span;
  std::uint64_t x = next_u64();
  while (x < reject_below) x = next_u64();
  return lo + static_cast<int>(x % span);
}

double SeedStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

SeedStream SeedStream::substream(std::uint64_t tag) const {
  return SeedStream(derive_seed(seed_, tag));
}

std::uint64_t CounterRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double CounterRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

}  // namespace heterocut
