#include "saddlesim/quantizer.hpp"

#include <cmath>
#include <string>

#include "saddlesim/errors.hpp"

namespace saddlesim {

Quantizer make_quantizer(int bits, std::size_t dim) {
  if (bits < 1 || bits > 62)
    throw ConfigError("quantizer bits must be in [1, 62], got " +
                      std::to_string(bits));
  Quantizer q;
  q.bits = bits;
  q.levels = (std::uint64_t{1} << bits) - 1;
  const double tau = static_cast<double>(q.levels);
  q.delta = static_cast<double>(dim) / (4.0 * tau * tau);
  return q;
}

Quantizer identity_quantizer() { return Quantizer{}; }

void quantize(const Vec& u, const Quantizer& q, RngStream& rng, Vec& out) {
  out.resize(u.size());
  double s = 0.0;
  for (double v : u) {
    if (!std::isfinite(v)) throw NonFiniteInput("quantize: non-finite input");
    s = std::max(s, std::abs(v));
  }
  if (q.identity() || s == 0.0) {
    out = u;
    return;
  }
  const double tau = static_cast<double>(q.levels);
  // Probabilities within snap_eps of the grid are rounded deterministically,
  // so on-grid coordinates pass through exactly.
  constexpr double snap_eps = 1e-12;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = std::abs(u[i]) / s;
    double v = r * tau;
    double level = std::floor(v);
    double p = v - level;
    if (p <= snap_eps) {
      p = 0.0;
    } else if (p >= 1.0 - snap_eps) {
      level += 1.0;
      p = 0.0;
    }
    if (p > 0.0 && rng.next_bernoulli(p)) level += 1.0;
    const double mag = s * level / tau;
    out[i] = u[i] < 0.0 ? -mag : mag;
  }
}

Vec quantize(const Vec& u, const Quantizer& q, RngStream& rng) {
  Vec out;
  quantize(u, q, rng, out);
  return out;
}

std::uint64_t bits_transmitted(std::size_t d, const Quantizer& q, int m) {
  if (q.identity())
    return static_cast<std::uint64_t>(m) * (static_cast<std::uint64_t>(d) * 32);
  return static_cast<std::uint64_t>(m) *
         (static_cast<std::uint64_t>(d) * (static_cast<std::uint64_t>(q.bits) + 1) + 32);
}

}  // namespace saddlesim
