#pragma once

#include <cstdint>
#include <vector>

#include "saddlesim/hyperparams.hpp"
#include "saddlesim/problems.hpp"
#include "saddlesim/topology.hpp"

namespace saddlesim {

// Gradient-norm statistics at the saddle point, produced by the benchmark:
// C_x = sum_{i,l} |grad_x f_il(z*)|^2 (same for C_y) and the squared norms of
// the node-averaged full gradients.
struct SaddleGradStats {
  double C_x = 0.0, C_y = 0.0;
  double mean_grad_x_sq = 0.0, mean_grad_y_sq = 0.0;
};

struct SwitchConstants {
  double C_max = 0.0;
  double C_1 = 0.0;
  double V_e = 0.0;
  // V_e = 0 and C_1 = 0: the optimal epsilon_0 is undefined and the switch
  // falls back to T0'.
  bool degenerate = false;
};

SwitchConstants compute_cmax_c1_ve(const HyperParams& hp,
                                   const SaddleGradStats& stats);

struct SwitchPlan {
  long long T0_prime = 0;
  long long T0 = 0;
  double epsilon0 = 0.0;
  double phi0 = 0.0;
  double T_epsilon = 0.0;  // recommended total iterations
  double C_max = 0.0, C_1 = 0.0, V_e = 0.0;
  double rho0 = 0.0, rho = 0.0;
  bool degenerate = false;
  // practical mode extras
  bool immediate = false;
  std::vector<long long> T0_per_node;
  std::vector<double> phi0_per_node;
};

// ceil(log 2 / -log rho0)
long long t0_prime(double rho0);

// epsilon0* = eps / (2 C_max Phi0), T0 = ceil(log eps0* / log rho0) and the
// total-iteration recommendation T(eps). Throws DegenerateVariance when both
// V_e and C_1 vanish.
SwitchPlan theoretical_switch(double epsilon, double phi0,
                              const HyperParams& hp,
                              const SwitchConstants& consts);

// Heavy-ball consensus iteration v^{k+1} = (1+eta) W v^k - eta v^{k-1} with
// eta tuned from the spectral gap. Preserves the exact average and contracts
// the spread geometrically.
std::vector<Vec> accelerated_gossip(const std::vector<Vec>& values,
                                    const NetworkTopology& topo, int iterations);

// Snapshot the practical detection procedure needs at t = T0'.
struct PracticalSwitchInput {
  const SaddleProblem* problem = nullptr;
  const NetworkTopology* topo = nullptr;
  const HyperParams* hp = nullptr;
  std::vector<Vec> x, y;            // z_{T0'}
  std::vector<Vec> x_prev, y_prev;  // z_{T0'-1}
  Vec x0, y0;                       // initial point
};

// Gossips the successive-iterate gaps; if every node still moves, gossips the
// local gradients and the per-node Phi_i0 approximations and derives T_i0,
// otherwise switches immediately. Three gossip invocations total.
SwitchPlan practical_switch(const PracticalSwitchInput& in, double epsilon,
                            double threshold, int gossip_iters);

}  // namespace saddlesim
