#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>

namespace crem {

/// splitmix64 finalizer; used to derive independent per-item seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Halton sequence in up to 6 dimensions with a seed-derived
/// Cranley-Patterson rotation.
class Halton {
 public:
  static constexpr std::size_t kMaxDim = 6;

  explicit Halton(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& s : shift_) s = u(rng);
  }

  /// Coordinate `dim` of point `index`, in [0, 1).
  double operator()(std::uint64_t index, std::size_t dim) const {
    static constexpr std::array<unsigned, kMaxDim> kBases{2, 3, 5, 7, 11, 13};
    const unsigned base = kBases[dim];
    double f = 1.0;
    double r = 0.0;
    for (std::uint64_t i = index + 1; i > 0; i /= base) {
      f /= base;
      r += f * static_cast<double>(i % base);
    }
    r += shift_[dim];
    return r >= 1.0 ? r - 1.0 : r;
  }

 private:
  std::array<double, kMaxDim> shift_{};
};

}  // namespace crem
