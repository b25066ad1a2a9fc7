#ifndef OMNIBUS_RNG_HPP
#define OMNIBUS_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace omnibus {

// Generator identifier recorded in calibration metadata, file headers and
// reports. Changing the substream derivation or the output mapping below
// changes reproduced numbers, so it must come with a new id.
inline constexpr const char* kRngId = "xoshiro256++/sm64";

namespace rng_detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace rng_detail

// Derives an independent 64-bit seed for a named purpose ("null-calibration",
// "power-data", ...) so that distinct uses of one user seed never share
// streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view domain) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : domain) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return rng_detail::mix64(rng_detail::mix64(seed + rng_detail::kGolden) ^ h);
}

// xoshiro256++ with the state derived from (seed, stream) through SplitMix64.
// Each (seed, stream) pair is an independent substream; replicate i of a
// Monte-Carlo run uses stream i, which makes results independent of how
// replicates are scheduled across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
    std::uint64_t s = rng_detail::mix64(seed + rng_detail::kGolden) ^
                      rng_detail::mix64(stream * rng_detail::kGolden + 0x632BE59BD9B4E019ULL);
    for (auto& word : state_) {
      s += rng_detail::kGolden;
      word = rng_detail::mix64(s);
    }
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rng_detail::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rng_detail::rotl(state_[3], 45);
    return result;
  }

  // Uniform on (0, 1]: 53-bit mantissa, never returns 0. Matches the p-value
  // domain so simulated null p-values are valid inputs without clamping.
  double uniform_open01() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via the Marsaglia polar method with a cached spare.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform_open01() - 1.0;
      v = 2.0 * uniform_open01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  double exponential(double rate) noexcept {
    return -std::log(uniform_open01()) / rate;
  }

  // Binomial(n, prob) by direct Bernoulli summation; n stays small in the
  // discrete scenarios, so no need for anything fancier.
  int binomial(int n, double prob) noexcept {
    int count = 0;
    for (int i = 0; i < n; ++i) {
      count += uniform_open01() <= prob ? 1 : 0;
    }
    return count;
  }

 private:
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace omnibus

#endif
