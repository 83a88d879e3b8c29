#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace tsplab {

// splitmix64 finalizer (Steele, Lea, Flood / Vigna). Used both as the step
// function of the generator and to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for stream `index` of purpose `tag` under a master seed.
// Streams are independent of the order in which they are consumed, so a
// sampler can draw anchors and offsets for point i without touching the
// streams of any other point.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return mix64(mix64(seed ^ (tag * 0x9e3779b97f4a7c15ULL)) + index);
}

// splitmix64 generator. Pinned here (rather than std:: distributions) so the
// same seed produces the same instances on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in {0, ..., n-1}. Modulo bias is < 2^-53 for any n used here.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Standard normal via Box-Muller on the pinned uniform source.
  double normal() {
    const double u1 = 1.0 - uniform01();  // in (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Stream purpose tags for the samplers.
namespace stream_tag {
constexpr std::uint64_t kOffset = 1;   // per-point coordinate draws
constexpr std::uint64_t kAnchor = 2;   // per-point subcube anchors
constexpr std::uint64_t kSmooth = 3;   // per-point Gaussian offsets
constexpr std::uint64_t kTour = 4;     // tour permutations
constexpr std::uint64_t kPivot = 5;    // random pivot choices
constexpr std::uint64_t kJitter = 6;   // gadget coordinate jitter
}  // namespace stream_tag

}  // namespace tsplab
