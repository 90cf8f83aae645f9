#include "saddlesim/comm.hpp"

#include <string>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"

namespace saddlesim {

CommState init_comm_state(const std::vector<Vec>& init,
                          const NetworkTopology& topo, double alpha) {
  CommState state;
  state.H = init;
  topo.mix(init, state.Hw);
  state.alpha = alpha;
  return state;
}

CommResult comm_round(const std::vector<Vec>& nu, CommState& state,
                      const NetworkTopology& topo, const Quantizer& q,
                      const CommRngKey& key) {
  const int m = topo.m;
  if (static_cast<int>(nu.size()) != m ||
      static_cast<int>(state.H.size()) != m ||
      static_cast<int>(state.Hw.size()) != m)
    throw DimensionMismatch("comm_round: node count mismatch");
  const std::size_t d = nu[0].size();
  for (int i = 0; i < m; ++i)
    if (nu[i].size() != d || state.H[i].size() != d || state.Hw[i].size() != d)
      throw DimensionMismatch("comm_round: vector dimension mismatch at node " +
                              std::to_string(i));
  const double a = state.alpha;

  CommResult res;
  res.bits = bits_transmitted(d, q, m);

  if (q.identity()) {
    res.nu_hat = nu;
    topo.mix(nu, res.nu_hat_w);
    for (int i = 0; i < m; ++i) {
      kernels::lincomb(state.H[i], 1.0 - a, state.H[i], a, res.nu_hat[i]);
      kernels::lincomb(state.Hw[i], 1.0 - a, state.Hw[i], a, res.nu_hat_w[i]);
    }
    return res;
  }

  std::vector<Vec> qdiff(m);
  Vec diff(d);
  for (int i = 0; i < m; ++i) {
    RngStream rng(key.seed, static_cast<std::uint64_t>(i), key.round, key.purpose);
    kernels::lincomb(diff, 1.0, nu[i], -1.0, state.H[i]);
    quantize(diff, q, rng, qdiff[i]);
  }

  res.nu_hat.resize(m);
  for (int i = 0; i < m; ++i) {
    res.nu_hat[i] = state.H[i];
    kernels::axpy(res.nu_hat[i], 1.0, qdiff[i]);
  }
  std::vector<Vec> qmix;
  topo.mix(qdiff, qmix);
  res.nu_hat_w.resize(m);
  for (int i = 0; i < m; ++i) {
    res.nu_hat_w[i] = state.Hw[i];
    kernels::axpy(res.nu_hat_w[i], 1.0, qmix[i]);
  }
  for (int i = 0; i < m; ++i) {
    kernels::lincomb(state.H[i], 1.0 - a, state.H[i], a, res.nu_hat[i]);
    kernels::lincomb(state.Hw[i], 1.0 - a, state.Hw[i], a, res.nu_hat_w[i]);
  }
  return res;
}

}  // namespace saddlesim
