#pragma once

#include <cmath>
#include <cstdint>

namespace mmax {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based random stream. Draw i of stream (seed, stream_id) is a pure
/// function of (seed, stream_id, i), so concurrent consumers that own disjoint
/// streams reproduce the serial sequence exactly.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id)
      : key_(detail::mix64(detail::mix64(seed + detail::kGolden) ^
                           detail::mix64(stream_id * detail::kGolden + 1))) {}

  std::uint64_t next_u64() { return detail::mix64(key_ + (++ctr_) * detail::kGolden); }

  /// Uniform on [0, 1), 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1), safe as a log argument.
  double next_uniform_pos() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Unit-rate exponential.
  double next_exponential() { return -std::log(next_uniform_pos()); }

  /// Standard normal (Box-Muller, two uniforms per deviate).
  double next_normal() {
    const double u = next_uniform_pos();
    const double v = next_uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace mmax
