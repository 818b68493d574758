// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "smoothtm/machine.hpp"
#include "smoothtm/smooth_step.hpp"

namespace smoothtm {

/// Seeded generator with a platform-independent uniform conversion; equal
/// seeds give equal streams everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t below(std::size_t n);
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Independent per-trial seed from a master seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Uniform on the simplex over `base`.
Dist random_dist(Rng& rng, const FiniteSet& base);
/// A point mass, a distribution on a random sub-support, or a full one,
/// each with probability about 1/3, so exact zeros occur.
Dist random_mixed_dist(Rng& rng, const FiniteSet& base);

/// States q0.., alphabet _ A B C ..; every transition uniformly random.
Machine random_machine(Rng& rng, std::size_t num_states, std::size_t num_symbols, std::size_t num_tapes);

/// Random state and tape cells on [-radius, radius].
SmoothConfig random_smooth_config(Rng& rng, const Machine& m, std::size_t radius);
SmoothConfig random_smooth_config(Rng& rng, const FiniteSet& states, const FiniteSet& alphabet, std::size_t blank,
                                  std::size_t num_tapes, std::size_t radius);
Configuration random_configuration(Rng& rng, const Machine& m, std::size_t radius);

}  // namespace smoothtm
