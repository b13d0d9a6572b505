#pragma once

// SplitMix64. Hand-rolled so that sampled start points and weights are
// identical across standard libraries (std:: distributions are not).

#include <cstdint>

#include "rncg/linalg.hpp"

namespace rncg {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent stream for item `index` under `seed`.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 outer(seed ^ 0x6a09e667f3bcc909ULL);
    const std::uint64_t base = outer.next();
    SplitMix64 inner(base + 0x9e3779b97f4a7c15ULL * (index + 1));
    return SplitMix64(inner.next());
  }

private:
  std::uint64_t state_;
};

inline Vector sample_box(SplitMix64& rng, const Vector& lb, const Vector& ub) {
  Vector x(lb.size());
  for (Eigen::Index k = 0; k < lb.size(); ++k) x[k] = lb[k] + (ub[k] - lb[k]) * rng.uniform();
  return x;
}

}  // namespace rncg
