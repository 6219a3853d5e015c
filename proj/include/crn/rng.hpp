#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace crn {

// 64-bit FNV-1a; stable across platforms, used for stream tags and config hashes.
std::uint64_t fnv1a(std::string_view text);

// Platform-independent random stream. std::*_distribution output is not
// specified bit-for-bit across standard libraries, so draws are built directly
// on the 64-bit engine.
class Rng {
 public:
  Rng() = default;
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for a named subsystem of a seeded run.
  static Rng derive(std::uint64_t seed, std::string_view stream);

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform on {0, ..., n - 1}; n > 0.
  std::size_t below(std::size_t n);

  // Index drawn from a probability vector; the last index absorbs rounding.
  std::size_t categorical(std::span<const double> probs);

 private:
  std::mt19937_64 engine_{0};
};

}  // namespace crn
