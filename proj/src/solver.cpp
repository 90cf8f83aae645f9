#include "saddlesim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"

namespace saddlesim {

NodeState init_node_state(const SaddleProblem& prob,
                          const NetworkTopology& topo, const Vec& x0,
                          const Vec& y0, double alpha_x, double alpha_y) {
  if (static_cast<int>(x0.size()) != prob.dim_x() ||
      static_cast<int>(y0.size()) != prob.dim_y())
    throw DimensionMismatch("initial point dimension mismatch");
  NodeState st;
  const int m = topo.m;
  st.x.assign(m, x0);
  st.y.assign(m, y0);
  st.Dx.assign(m, Vec(x0.size(), 0.0));
  st.Dy.assign(m, Vec(y0.size(), 0.0));
  st.cx = init_comm_state(st.x, topo, alpha_x);
  st.cy = init_comm_state(st.y, topo, alpha_y);
  return st;
}

void ipdhg_step(NodeState& state, const HyperParams& hp, int phase,
                OracleKind oracle, const SaddleProblem& prob,
                const SamplingDistribution& dist, const NetworkTopology& topo,
                const Quantizer& q, std::uint64_t seed, std::uint64_t round,
                StepCounters& counters) {
  const int m = topo.m;
  const auto pp = hp.phase(phase);
  const double s = pp.s;

  // Oracle gradients at the pre-step iterates; one batch draw per node
  // shared by the primal and dual blocks.
  std::vector<OracleResult> g(m);
  for (int i = 0; i < m; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i), round,
                  RngPurpose::oracle_sample);
    g[i] = oracle == OracleKind::gsgo
               ? gsgo(prob, dist, i, state.x[i], state.y[i], rng)
               : svrgo(prob, dist, state.refs, i, state.x[i], state.y[i], rng);
    counters.grads += g[i].grads;
  }
  if (oracle == OracleKind::svrgo) {
    const RefreshResult rr =
        maybe_refresh_reference(prob, state.refs, state.x, state.y, seed, round);
    counters.grads += rr.grads;
    counters.refresh_events += rr.refreshes;
  }

  // Primal block: nu = x - s G^x - s D^x, COMM, multiplier and prox updates.
  std::vector<Vec> nu(m);
  for (int i = 0; i < m; ++i) {
    nu[i].resize(state.x[i].size());
    kernels::lincomb3(nu[i], 1.0, state.x[i], -s, g[i].gx, -s, state.Dx[i]);
  }
  CommResult cr = comm_round(nu, state.cx, topo, q,
                             {seed, round, RngPurpose::quantize_primal});
  counters.comms += 1;
  counters.bits += cr.bits;
  Vec diff;
  for (int i = 0; i < m; ++i) {
    diff.resize(nu[i].size());
    kernels::lincomb(diff, 1.0, cr.nu_hat[i], -1.0, cr.nu_hat_w[i]);
    kernels::axpy(state.Dx[i], pp.gamma_x / (2.0 * s), diff);
    kernels::lincomb(state.x[i], 1.0, nu[i], -pp.gamma_x / 2.0, diff);
    prob.prox_x(state.x[i], s);
  }

  // Dual block: nu = y + s G^y - s D^y, mirrored updates.
  for (int i = 0; i < m; ++i) {
    nu[i].resize(state.y[i].size());
    kernels::lincomb3(nu[i], 1.0, state.y[i], s, g[i].gy, -s, state.Dy[i]);
  }
  cr = comm_round(nu, state.cy, topo, q,
                  {seed, round, RngPurpose::quantize_dual});
  counters.comms += 1;
  counters.bits += cr.bits;
  for (int i = 0; i < m; ++i) {
    diff.resize(nu[i].size());
    kernels::lincomb(diff, 1.0, cr.nu_hat[i], -1.0, cr.nu_hat_w[i]);
    kernels::axpy(state.Dy[i], pp.gamma_y / (2.0 * s), diff);
    kernels::lincomb(state.y[i], 1.0, nu[i], -pp.gamma_y / 2.0, diff);
    prob.prox_y(state.y[i], s);
  }
}

namespace {

RunOutcome run_single_phase(const SaddleProblem& prob,
                            const NetworkTopology& topo, const Quantizer& q,
                            const HyperParams& hp,
                            const SamplingDistribution& dist, const Vec& x0,
                            const Vec& y0, long long T, std::uint64_t seed,
                            const TraceSink& sink, OracleKind oracle) {
  if (T < 1) throw ConfigError("run needs T >= 1");
  const int phase = oracle == OracleKind::svrgo ? 1 : 0;
  const auto pp = hp.phase(phase);
  RunOutcome out;
  out.state = init_node_state(prob, topo, x0, y0, pp.alpha_x, pp.alpha_y);
  if (oracle == OracleKind::svrgo) {
    out.totals.grads +=
        init_references(prob, out.state.x, out.state.y, hp.p_ref, out.state.refs);
    out.totals.refresh_events += topo.m;
    out.switch_iter = 0;
  }
  for (long long t = 0; t < T; ++t) {
    ipdhg_step(out.state, hp, phase, oracle, prob, dist, topo, q, seed,
               static_cast<std::uint64_t>(t), out.totals);
    if (sink)
      sink(IterationRecord{t + 1, oracle, phase, out.totals, &out.state});
  }
  return out;
}

std::uint64_t init_refs_at(const SaddleProblem& prob, NodeState& state,
                           double p_ref) {
  return init_references(prob, state.x, state.y, p_ref, state.refs);
}

}  // namespace

RunOutcome run_cdpsvrg(const SaddleProblem& prob, const NetworkTopology& topo,
                       const Quantizer& q, const HyperParams& hp,
                       const SamplingDistribution& dist, const Vec& x0,
                       const Vec& y0, long long T, std::uint64_t seed,
                       const TraceSink& sink) {
  return run_single_phase(prob, topo, q, hp, dist, x0, y0, T, seed, sink,
                          OracleKind::svrgo);
}

RunOutcome run_gsgo(const SaddleProblem& prob, const NetworkTopology& topo,
                    const Quantizer& q, const HyperParams& hp,
                    const SamplingDistribution& dist, const Vec& x0,
                    const Vec& y0, long long T, std::uint64_t seed,
                    const TraceSink& sink) {
  return run_single_phase(prob, topo, q, hp, dist, x0, y0, T, seed, sink,
                          OracleKind::gsgo);
}

RunOutcome run_cdpssg(const SaddleProblem& prob, const NetworkTopology& topo,
                      const Quantizer& q, const HyperParams& hp,
                      const SamplingDistribution& dist, const Vec& x0,
                      const Vec& y0, long long T, const SwitchSpec& sw,
                      std::uint64_t seed, const TraceSink& sink) {
  if (T < 1) throw ConfigError("run needs T >= 1");
  if (sw.mode == SwitchSpec::Mode::theoretical && sw.t0 <= 0)
    return run_cdpsvrg(prob, topo, q, hp, dist, x0, y0, T, seed, sink);
  if (sw.mode == SwitchSpec::Mode::practical &&
      (sw.epsilon <= 0.0 || sw.epsilon >= 1.0))
    throw ConfigError("practical switching needs epsilon in (0,1)");

  RunOutcome out;
  out.state = init_node_state(prob, topo, x0, y0, hp.alpha_x0, hp.alpha_y0);

  long long t0 = sw.mode == SwitchSpec::Mode::theoretical
                     ? sw.t0
                     : std::numeric_limits<long long>::max();
  const long long t0p =
      sw.mode == SwitchSpec::Mode::practical ? t0_prime(hp.rho0) : -1;

  std::vector<Vec> x_prev, y_prev;
  bool switched = false;
  for (long long t = 0; t < T; ++t) {
    if (!switched && t == t0) {
      // Switch: references start at the switch iterate; the comm shadows are
      // carried over, only the step size and gamma/alpha change.
      out.totals.grads += init_refs_at(prob, out.state, hp.p_ref);
      out.totals.refresh_events += topo.m;
      out.state.cx.alpha = hp.alpha_x;
      out.state.cy.alpha = hp.alpha_y;
      out.switch_iter = t;
      switched = true;
    }
    if (!switched && sw.mode == SwitchSpec::Mode::practical && t == t0p - 1) {
      x_prev = out.state.x;  // z_{T0'-1}
      y_prev = out.state.y;
    }
    const OracleKind oracle = switched ? OracleKind::svrgo : OracleKind::gsgo;
    ipdhg_step(out.state, hp, switched ? 1 : 0, oracle, prob, dist, topo, q,
               seed, static_cast<std::uint64_t>(t), out.totals);
    if (sink)
      sink(IterationRecord{t + 1, oracle, switched ? 1 : 0, out.totals,
                           &out.state});

    if (!switched && sw.mode == SwitchSpec::Mode::practical && t + 1 == t0p) {
      PracticalSwitchInput in;
      in.problem = &prob;
      in.topo = &topo;
      in.hp = &hp;
      in.x = out.state.x;
      in.y = out.state.y;
      in.x_prev = std::move(x_prev);
      in.y_prev = std::move(y_prev);
      in.x0 = x0;
      in.y0 = y0;
      out.plan = practical_switch(in, sw.epsilon, sw.threshold, sw.gossip_iters);
      t0 = out.plan->T0;
    }
  }
  return out;
}

}  // namespace saddlesim
