#pragma once

#include <cmath>
#include <cstdint>

namespace saddlesim {

// Purpose tags keep sub-streams independent: the quantizer draws of a run
// never overlap with the oracle draws, so turning compression on or off
// leaves every oracle sample unchanged.
enum class RngPurpose : std::uint64_t {
  quantize_primal = 1,
  quantize_dual = 2,
  oracle_sample = 3,
  reference_refresh = 4,
  data_shuffle = 5,
  synthetic_data = 6,
  init_point = 7,
};

// Counter-based stream keyed on (seed, node, round, purpose). Every consumer
// derives its own stream, so results are independent of node execution order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t node, std::uint64_t round,
            RngPurpose purpose)
      : state_(mix(mix(mix(mix(0x9e3779b97f4a7c15ULL ^ seed) + node) + round) +
                   static_cast<std::uint64_t>(purpose))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Standard normal via Box-Muller; one spare cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace saddlesim
