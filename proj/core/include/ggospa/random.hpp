// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ggospa {

/// Seeded generator used by every experiment.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The uniform and normal transforms are written out here because
/// the std distributions are implementation-defined, and experiment CSVs
/// must not depend on the standard library in use.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double low, double high) {
    return low + (high - low) * uniform();
  }
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();
  bool bernoulli(double probability) { return uniform() < probability; }
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 mixing of a base seed with stream coordinates, so that
/// per-run generators do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0);

}  // namespace ggospa
