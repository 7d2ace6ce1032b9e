#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace rkfda {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Folds a key path (seed, run, split, index, ...) into one stream seed.
/// Streams depend only on the key path, never on scheduling.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys);

/// FNV-1a, for turning model ids into stream keys.
std::uint64_t hash_string(std::string_view s);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace rkfda
