#pragma once

#include "saddlesim/problems.hpp"
#include "saddlesim/topology.hpp"

namespace saddlesim {

// Step sizes and COMM parameters for the two oracle phases, derived from the
// problem constants and the graph spectrum. Phase 0 drives the generic
// stochastic oracle, phase 1 the variance-reduced one.
struct HyperParams {
  // phase 0
  double s0 = 0.0;
  double b_x0 = 0.0, b_y0 = 0.0;
  double alpha_x0 = 0.0, alpha_y0 = 0.0;
  double gamma_x0 = 0.0, gamma_y0 = 0.0;
  double M_x0 = 1.0, M_y0 = 1.0;
  double rho0 = 0.0;

  // phase 1
  double s = 0.0;
  double c_tilde_x = 0.0, c_tilde_y = 0.0;
  double b_x = 0.0, b_y = 0.0;
  double alpha_x = 0.0, alpha_y = 0.0;
  double gamma_x = 0.0, gamma_y = 0.0;
  double M_x = 1.0, M_y = 1.0;
  double rho = 0.0;

  // shared
  double delta = 0.0;
  double p_ref = 1.0;
  double p_min = 1.0;
  int n = 1;
  int m = 1;
  double L = 0.0, mu = 0.0, kappa_f = 1.0, kappa_g = 1.0;
  double lambda_max_IW = 0.0, lambda_second_min_IW = 0.0;

  struct Phase {
    double s, gamma_x, gamma_y, alpha_x, alpha_y;
  };
  Phase phase(int k) const {
    return k == 0 ? Phase{s0, gamma_x0, gamma_y0, alpha_x0, alpha_y0}
                  : Phase{s, gamma_x, gamma_y, alpha_x, alpha_y};
  }
};

// Fills the phase-0 block and the shared fields. Throws InfeasibleConstants
// when a derived parameter leaves its admissible interval.
HyperParams derive_params_gsgo(const ProblemConstants& c, int n, double p_min,
                               const NetworkTopology& topo, double delta);

// Fills the phase-1 block of `hp` (shared fields must already be set).
void derive_params_svrg(HyperParams& hp, const ProblemConstants& c,
                        double p_ref);

// Both phases at once.
HyperParams derive_hyperparams(const ProblemConstants& c, int n, double p_min,
                               const NetworkTopology& topo, double delta,
                               double p_ref);

}  // namespace saddlesim
