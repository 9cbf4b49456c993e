#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace trdecomp {

/// SplitMix64 finalizer. Used to derive independent per-trial seeds.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x);

/// Folds a list of integers into one seed: h = splitmix64(h ^ v) for each v,
/// starting from splitmix64(base). The result depends only on the values and
/// their order, never on scheduling.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base,
                                        std::initializer_list<std::uint64_t> parts);

/// Portable random stream.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the standard).
/// Uniform doubles take the top 53 bits of one engine draw. Normals use the
/// Marsaglia polar method on pairs of uniforms, caching the second variate.
/// The distribution adaptors of <random> are avoided since their algorithms
/// are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform on [lo, hi].
  double uniform(double lo, double hi);
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace trdecomp
