#include "saddlesim/lyapunov.hpp"

#include <cmath>

#include "saddlesim/kernels.hpp"

namespace saddlesim {

namespace {

// |U|^2 weighted by (I-W)^dagger (x) I, via the cached eigendecomposition:
// sum over positive eigenvalues of |sum_i v_ij U_i|^2 / lambda_j.
double pinv_weighted_sumsq(const std::vector<Vec>& u,
                           const NetworkTopology& topo) {
  const int m = topo.m;
  if (m <= 1) return 0.0;
  const std::size_t d = u[0].size();
  double acc = 0.0;
  Vec proj(d);
  for (int j = 0; j < m; ++j) {
    const double lam = topo.iw_eigenvalues[j];
    if (lam <= 1e-12) continue;
    proj.assign(d, 0.0);
    for (int i = 0; i < m; ++i)
      kernels::axpy(proj, topo.iw_eigenvectors[static_cast<std::size_t>(i) * m + j],
                    u[i]);
    acc += kernels::sumsq(proj) / lam;
  }
  return acc;
}

double stacked_dist_sq(const std::vector<Vec>& v, const Vec& center) {
  double acc = 0.0;
  Vec diff(center.size());
  for (const auto& vi : v) {
    kernels::lincomb(diff, 1.0, vi, -1.0, center);
    acc += kernels::sumsq(diff);
  }
  return acc;
}

}  // namespace

double lyapunov(const NodeState& state, const HyperParams& hp, int phase,
                const SaddleProblem& prob, const NetworkTopology& topo,
                const BenchmarkSolution& sol) {
  const int m = topo.m;
  const auto pp = hp.phase(phase);
  const double Mx = phase == 0 ? hp.M_x0 : hp.M_x;
  const double My = phase == 0 ? hp.M_y0 : hp.M_y;
  const double sqrt_delta = std::sqrt(hp.delta);

  // Node-level full gradients at z* and their mean.
  std::vector<Vec> gx(m), gy(m);
  Vec gx_mean(prob.dim_x(), 0.0), gy_mean(prob.dim_y(), 0.0);
  for (int i = 0; i < m; ++i) {
    prob.grad_x_full(i, sol.x_star, sol.y_star, gx[i]);
    prob.grad_y_full(i, sol.x_star, sol.y_star, gy[i]);
    kernels::axpy(gx_mean, 1.0 / m, gx[i]);
    kernels::axpy(gy_mean, 1.0 / m, gy[i]);
  }

  double phi = Mx * stacked_dist_sq(state.x, sol.x_star) +
               My * stacked_dist_sq(state.y, sol.y_star);

  if (m > 1) {
    // D*_x = -(I-J) grad_x F(1 z*), D*_y = +(I-J) grad_y F(1 z*).
    std::vector<Vec> dxs(m), dys(m);
    for (int i = 0; i < m; ++i) {
      dxs[i].resize(prob.dim_x());
      kernels::lincomb(dxs[i], 1.0, state.Dx[i], 1.0, gx[i]);
      kernels::axpy(dxs[i], -1.0, gx_mean);
      dys[i].resize(prob.dim_y());
      kernels::lincomb(dys[i], 1.0, state.Dy[i], -1.0, gy[i]);
      kernels::axpy(dys[i], 1.0, gy_mean);
    }
    phi += 2.0 * pp.s * pp.s / pp.gamma_x * pinv_weighted_sumsq(dxs, topo);
    phi += 2.0 * pp.s * pp.s / pp.gamma_y * pinv_weighted_sumsq(dys, topo);
  }

  if (sqrt_delta > 0.0) {
    // H*_x = 1 (x* - (s/m) grad_x f(z*)) with the phase step.
    Vec hx(prob.dim_x()), hy(prob.dim_y());
    kernels::lincomb(hx, 1.0, sol.x_star, -pp.s, gx_mean);
    kernels::lincomb(hy, 1.0, sol.y_star, pp.s, gy_mean);
    phi += sqrt_delta * stacked_dist_sq(state.cx.H, hx);
    phi += sqrt_delta * stacked_dist_sq(state.cy.H, hy);
  }

  if (phase == 1) {
    phi += hp.c_tilde_x * stacked_dist_sq(state.refs.x_tilde, sol.x_star);
    phi += hp.c_tilde_y * stacked_dist_sq(state.refs.y_tilde, sol.y_star);
  }
  return phi;
}

}  // namespace saddlesim
