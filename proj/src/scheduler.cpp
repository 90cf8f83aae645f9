#include "saddlesim/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"

namespace saddlesim {

SwitchConstants compute_cmax_c1_ve(const HyperParams& hp,
                                   const SaddleGradStats& stats) {
  SwitchConstants out;
  out.C_max = std::max({(hp.M_x + hp.c_tilde_x) / hp.M_x0,
                        (hp.M_y + hp.c_tilde_y) / hp.M_y0,
                        hp.s * hp.s * hp.gamma_x0 / (hp.s0 * hp.s0 * hp.gamma_x),
                        hp.s * hp.s * hp.gamma_y0 / (hp.s0 * hp.s0 * hp.gamma_y),
                        2.0});
  out.C_1 = 2.0 * hp.m * std::sqrt(hp.delta) * (hp.s - hp.s0) * (hp.s - hp.s0) *
            (stats.mean_grad_x_sq + stats.mean_grad_y_sq);
  const double np = hp.n * hp.p_min;
  out.V_e = 2.0 * hp.s0 * hp.s0 * (stats.C_x + stats.C_y) /
            ((1.0 - hp.rho0) * hp.n * np);
  out.degenerate = out.V_e == 0.0 && out.C_1 == 0.0;
  return out;
}

long long t0_prime(double rho0) {
  return static_cast<long long>(std::ceil(std::log(2.0) / -std::log(rho0)));
}

SwitchPlan theoretical_switch(double epsilon, double phi0,
                              const HyperParams& hp,
                              const SwitchConstants& consts) {
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw ConfigError("epsilon must lie in (0,1)");
  if (phi0 <= 0.0) throw ConfigError("phi0 must be positive");
  if (consts.degenerate)
    throw DegenerateVariance(
        "V_e = 0 and C_1 = 0: epsilon_0* undefined (fall back to T0')");

  SwitchPlan plan;
  plan.T0_prime = t0_prime(hp.rho0);
  plan.phi0 = phi0;
  plan.C_max = consts.C_max;
  plan.C_1 = consts.C_1;
  plan.V_e = consts.V_e;
  plan.rho0 = hp.rho0;
  plan.rho = hp.rho;
  plan.epsilon0 = epsilon / (2.0 * consts.C_max * phi0);
  plan.T0 = static_cast<long long>(
      std::ceil(std::log(plan.epsilon0) / std::log(hp.rho0)));
  plan.T_epsilon =
      2.0 / -std::log(hp.rho) *
      std::log(2.0 *
               std::sqrt(consts.C_max * phi0 *
                         (consts.C_max * consts.V_e + consts.C_1)) /
               epsilon);
  return plan;
}

std::vector<Vec> accelerated_gossip(const std::vector<Vec>& values,
                                    const NetworkTopology& topo,
                                    int iterations) {
  if (iterations < 1) throw ConfigError("gossip needs at least one iteration");
  if (topo.m == 1) return values;
  const double l2 = topo.lambda2_W;
  const double root = std::sqrt(std::max(0.0, 1.0 - l2 * l2));
  const double eta = (1.0 - root) / (1.0 + root);

  std::vector<Vec> prev = values;
  std::vector<Vec> cur;
  topo.mix(prev, cur);
  for (int k = 1; k < iterations; ++k) {
    std::vector<Vec> mixed;
    topo.mix(cur, mixed);
    std::vector<Vec> next(topo.m);
    for (int i = 0; i < topo.m; ++i) {
      next[i].resize(values[i].size());
      kernels::lincomb(next[i], 1.0 + eta, mixed[i], -eta, prev[i]);
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

SwitchPlan practical_switch(const PracticalSwitchInput& in, double epsilon,
                            double threshold, int gossip_iters) {
  const auto& hp = *in.hp;
  const auto& topo = *in.topo;
  const auto& prob = *in.problem;
  const int m = topo.m;

  SwitchPlan plan;
  plan.T0_prime = t0_prime(hp.rho0);
  plan.rho0 = hp.rho0;
  plan.rho = hp.rho;
  // C_max never needs the saddle point; C_1 and V_e stay unset here.
  plan.C_max = compute_cmax_c1_ve(hp, SaddleGradStats{}).C_max;

  // Gossip 1: successive-iterate gaps (scalars).
  std::vector<Vec> gaps(m, Vec(1, 0.0));
  Vec diff;
  for (int i = 0; i < m; ++i) {
    diff.resize(in.x[i].size());
    kernels::lincomb(diff, 1.0, in.x[i], -1.0, in.x_prev[i]);
    double g = kernels::sumsq(diff);
    diff.resize(in.y[i].size());
    kernels::lincomb(diff, 1.0, in.y[i], -1.0, in.y_prev[i]);
    g += kernels::sumsq(diff);
    gaps[i][0] = g;
  }
  gaps = accelerated_gossip(gaps, topo, gossip_iters);
  bool all_moving = true;
  for (int i = 0; i < m; ++i) all_moving = all_moving && gaps[i][0] > threshold;

  if (!all_moving) {
    plan.immediate = true;
    plan.T0 = plan.T0_prime;
    plan.T0_per_node.assign(m, plan.T0_prime);
    return plan;
  }

  // Gossip 2: local full gradients (one invocation on stacked vectors).
  const int dx = prob.dim_x(), dy = prob.dim_y();
  std::vector<Vec> grads(m, Vec(dx + dy));
  Vec gx, gy;
  for (int i = 0; i < m; ++i) {
    prob.grad_x_full(i, in.x[i], in.y[i], gx);
    prob.grad_y_full(i, in.x[i], in.y[i], gy);
    std::copy(gx.begin(), gx.end(), grads[i].begin());
    std::copy(gy.begin(), gy.end(), grads[i].begin() + dx);
  }
  std::vector<Vec> mixed_grads = accelerated_gossip(grads, topo, gossip_iters);

  // Per-node Phi_i0 with z_{T0'} standing in for z*.
  const double sqrt_delta = std::sqrt(hp.delta);
  const double inv_lm1 = topo.m > 1 ? 1.0 / topo.lambda_second_min_IW : 0.0;
  std::vector<Vec> phis(m, Vec(1, 0.0));
  for (int i = 0; i < m; ++i) {
    const Vec gtx(mixed_grads[i].begin(), mixed_grads[i].begin() + dx);
    const Vec gty(mixed_grads[i].begin() + dx, mixed_grads[i].end());
    prob.grad_x_full(i, in.x[i], in.y[i], gx);
    prob.grad_y_full(i, in.x[i], in.y[i], gy);

    double phi = 0.0;
    diff.resize(dx);
    kernels::lincomb(diff, 1.0, in.x0, -1.0, in.x[i]);
    phi += hp.M_x0 * kernels::sumsq(diff);
    diff.resize(dy);
    kernels::lincomb(diff, 1.0, in.y0, -1.0, in.y[i]);
    phi += hp.M_y0 * kernels::sumsq(diff);

    diff.resize(dx);
    kernels::lincomb(diff, 1.0, gx, -1.0, gtx);
    phi += 2.0 * hp.s0 * hp.s0 / hp.gamma_x0 * kernels::sumsq(diff) * inv_lm1;
    diff.resize(dy);
    kernels::lincomb(diff, 1.0, gy, -1.0, gty);
    phi += 2.0 * hp.s0 * hp.s0 / hp.gamma_y0 * kernels::sumsq(diff) * inv_lm1;

    if (sqrt_delta > 0.0) {
      diff.resize(dx);
      kernels::lincomb(diff, 1.0, in.x0, -1.0, in.x[i]);
      kernels::axpy(diff, hp.s0, gtx);
      phi += sqrt_delta * kernels::sumsq(diff);
      diff.resize(dy);
      kernels::lincomb(diff, 1.0, in.y0, -1.0, in.y[i]);
      kernels::axpy(diff, -hp.s0, gty);
      phi += sqrt_delta * kernels::sumsq(diff);
    }
    phis[i][0] = phi;
  }

  // Gossip 3: the Phi_i0 scalars.
  phis = accelerated_gossip(phis, topo, gossip_iters);

  plan.T0_per_node.resize(m);
  plan.phi0_per_node.resize(m);
  long long t0_max = plan.T0_prime;
  for (int i = 0; i < m; ++i) {
    const double phi_bar = phis[i][0];
    plan.phi0_per_node[i] = phi_bar;
    const double eps0 = epsilon / (2.0 * plan.C_max * phi_bar);
    long long t0 = plan.T0_prime;
    if (eps0 < 1.0)
      t0 = static_cast<long long>(std::ceil(std::log(eps0) / std::log(hp.rho0)));
    t0 = std::max(t0, plan.T0_prime);
    plan.T0_per_node[i] = t0;
    t0_max = std::max(t0_max, t0);
  }
  plan.phi0 = phis[0][0];
  plan.epsilon0 = epsilon / (2.0 * plan.C_max * plan.phi0);
  plan.T0 = t0_max;
  return plan;
}

}  // namespace saddlesim
