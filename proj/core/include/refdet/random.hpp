#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace refdet {

// Deterministic random stream. Bounded draws are derived from raw
// mt19937_64 output (whose sequence is fixed by the standard) rather than
// std:: distributions, so corpora are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, label, index); used to give every
  /// generation attempt its own stream so work can be split freely.
  static RandomStream derive(std::uint64_t seed, std::string_view label,
                             std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  int uniform(int lo, int hi);
  /// Uniform in [0, 1).
  double unit();
  bool chance(double probability) { return unit() < probability; }

  template <class T>
  const T& pick(std::span<const T> items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace refdet
