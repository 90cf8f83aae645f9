#pragma once

#include <cstdint>
#include <vector>

#include "saddlesim/rng.hpp"

namespace saddlesim {

using Vec = std::vector<double>;

// Unbiased b-bit stochastic quantizer over the inf-norm scale. delta bounds
// the relative variance E|Q(u)-u|^2 <= delta*|u|^2; for dimension d it equals
// d/(4 tau^2) with tau = 2^b - 1 (per-coordinate stochastic rounding variance
// <= s^2/(4 tau^2), summed over d coordinates, with |u|^2 >= s^2).
// bits == 0 encodes the identity operator ("compression off", delta = 0).
struct Quantizer {
  int bits = 0;
  std::uint64_t levels = 0;  // tau = 2^bits - 1
  double delta = 0.0;

  bool identity() const { return bits == 0; }
};

// dim is the dimension of the vectors this quantizer will compress.
Quantizer make_quantizer(int bits, std::size_t dim);
Quantizer identity_quantizer();

// Q(u) into out (resized). E[Q(u)] = u; inputs already on the quantization
// grid pass through unchanged. Throws NonFiniteInput.
void quantize(const Vec& u, const Quantizer& q, RngStream& rng, Vec& out);
Vec quantize(const Vec& u, const Quantizer& q, RngStream& rng);

// Wire cost of one compressed vector per node and round: (bits+1) per
// coordinate (sign + level) plus a 32-bit scale per vector, times m nodes.
// The identity operator costs 32 bits per coordinate and no scale, matching
// the usual full-precision accounting for uncompressed methods.
std::uint64_t bits_transmitted(std::size_t d, const Quantizer& q, int m);

}  // namespace saddlesim
