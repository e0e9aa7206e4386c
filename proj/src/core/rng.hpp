#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace robggm {

// xoshiro256++ (Blackman & Vigna 2019), state seeded through SplitMix64 as
// the authors recommend. Every consumer asks for its own stream via a string
// tag, so adding a new consumer later never shifts the draws of an existing
// one for the same user seed.
//
// All derived draws (uniform, normal, bernoulli, shuffles) are built on
// next_u64() with fixed arithmetic, so runs on the same machine are
// byte-reproducible. Normal variates use the Marsaglia polar method, whose
// std::log call is the one libm dependency; see README for the portability
// note.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Stream derived from (tag, seed): FNV-1a hash of the tag mixed into the
  // SplitMix64 seeding sequence.
  static Rng stream(std::string_view tag, std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01();

  // Standard normal, Marsaglia polar method (rejection, consumes a variable
  // number of uniforms; pairs are cached).
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  bool bernoulli(double p);

  // Uniform integer in [0, n), unbiased via rejection sampling.
  std::uint64_t uniform_below(std::uint64_t n);

  // Fisher-Yates, in place.
  void shuffle(std::vector<int>& v);

  // k distinct values out of {0, ..., n-1}, in shuffled order.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace robggm
