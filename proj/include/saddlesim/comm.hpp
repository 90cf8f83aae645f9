#pragma once

#include <cstdint>
#include <vector>

#include "saddlesim/quantizer.hpp"
#include "saddlesim/rng.hpp"
#include "saddlesim/topology.hpp"

namespace saddlesim {

// Shadow states of the difference-compression protocol. H tracks the local
// payload estimate, Hw its W-aggregate: with an exact compressor Hw stays the
// W-mix of H after every round.
struct CommState {
  std::vector<Vec> H;
  std::vector<Vec> Hw;
  double alpha = 1.0;
};

// H = copies of init, Hw = W-mix of init.
CommState init_comm_state(const std::vector<Vec>& init,
                          const NetworkTopology& topo, double alpha);

struct CommResult {
  std::vector<Vec> nu_hat;
  std::vector<Vec> nu_hat_w;
  std::uint64_t bits = 0;  // wire bits for the round, all nodes
};

// Keys the per-node quantizer sub-streams so results do not depend on node
// execution order.
struct CommRngKey {
  std::uint64_t seed = 0;
  std::uint64_t round = 0;
  RngPurpose purpose = RngPurpose::quantize_primal;
};

// One synchronous round: each node transmits one quantized innovation
// Q(nu_i - H_i); shadows are updated in place. With the identity operator the
// round short-circuits to exact transmission (nu_hat = nu, nu_hat_w = W nu),
// which is the same map in exact arithmetic and keeps the uncompressed path
// bit-identical to a direct implementation.
CommResult comm_round(const std::vector<Vec>& nu, CommState& state,
                      const NetworkTopology& topo, const Quantizer& q,
                      const CommRngKey& key);

}  // namespace saddlesim
