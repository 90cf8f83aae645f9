#include "saddlesim/oracles.hpp"

#include <cmath>
#include <string>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"

namespace saddlesim {

SamplingDistribution SamplingDistribution::uniform(int m, int n) {
  std::vector<Vec> probs(m, Vec(n, 1.0 / n));
  return from_probs(std::move(probs));
}

SamplingDistribution SamplingDistribution::from_probs(std::vector<Vec> probs) {
  SamplingDistribution dist;
  dist.probs = std::move(probs);
  dist.p_min = 1.0;
  dist.cdf.resize(dist.probs.size());
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    double acc = 0.0;
    dist.cdf[i].resize(dist.probs[i].size());
    for (std::size_t l = 0; l < dist.probs[i].size(); ++l) {
      const double p = dist.probs[i][l];
      if (p <= 0.0) throw ConfigError("batch probabilities must be positive");
      dist.p_min = std::min(dist.p_min, p);
      acc += p;
      dist.cdf[i][l] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9)
      throw ConfigError("batch probabilities must sum to 1 (node " +
                        std::to_string(i) + ")");
    dist.cdf[i].back() = 1.0;
  }
  return dist;
}

int SamplingDistribution::sample(int node, RngStream& rng) const {
  const double u = rng.next_double();
  const auto& c = cdf[node];
  for (std::size_t l = 0; l + 1 < c.size(); ++l)
    if (u < c[l]) return static_cast<int>(l);
  return static_cast<int>(c.size()) - 1;
}

std::uint64_t init_references(const SaddleProblem& prob,
                              const std::vector<Vec>& x,
                              const std::vector<Vec>& y, double p_ref,
                              ReferenceState& refs) {
  const int m = prob.nodes();
  refs.x_tilde = x;
  refs.y_tilde = y;
  refs.grad_x_cache.resize(m);
  refs.grad_y_cache.resize(m);
  std::uint64_t grads = 0;
  for (int i = 0; i < m; ++i) {
    prob.grad_x_full(i, x[i], y[i], refs.grad_x_cache[i]);
    prob.grad_y_full(i, x[i], y[i], refs.grad_y_cache[i]);
    grads += prob.dataset().node_samples(i);
  }
  refs.p_ref = p_ref;
  refs.valid = true;
  return grads;
}

OracleResult gsgo(const SaddleProblem& prob, const SamplingDistribution& dist,
                  int node, const Vec& x, const Vec& y, RngStream& rng) {
  const int l = dist.sample(node, rng);
  const double w = 1.0 / (prob.batches() * dist.prob(node, l));
  OracleResult res;
  prob.grad_x(node, l, x, y, res.gx);
  prob.grad_y(node, l, x, y, res.gy);
  if (w != 1.0) {
    for (auto& c : res.gx) c *= w;
    for (auto& c : res.gy) c *= w;
  }
  res.grads = prob.dataset().batch_samples(node, l);
  return res;
}

OracleResult svrgo(const SaddleProblem& prob, const SamplingDistribution& dist,
                   const ReferenceState& refs, int node, const Vec& x,
                   const Vec& y, RngStream& rng) {
  if (!refs.valid)
    throw StaleReferenceCache("svrgo called before references were built");
  const int l = dist.sample(node, rng);
  const double w = 1.0 / (prob.batches() * dist.prob(node, l));

  OracleResult res;
  Vec at_ref;
  prob.grad_x(node, l, x, y, res.gx);
  prob.grad_x(node, l, refs.x_tilde[node], refs.y_tilde[node], at_ref);
  kernels::lincomb(res.gx, w, res.gx, -w, at_ref);
  kernels::axpy(res.gx, 1.0, refs.grad_x_cache[node]);

  prob.grad_y(node, l, x, y, res.gy);
  prob.grad_y(node, l, refs.x_tilde[node], refs.y_tilde[node], at_ref);
  kernels::lincomb(res.gy, w, res.gy, -w, at_ref);
  kernels::axpy(res.gy, 1.0, refs.grad_y_cache[node]);

  res.grads = 2 * prob.dataset().batch_samples(node, l);
  return res;
}

RefreshResult maybe_refresh_reference(const SaddleProblem& prob,
                                      ReferenceState& refs,
                                      const std::vector<Vec>& x,
                                      const std::vector<Vec>& y,
                                      std::uint64_t seed, std::uint64_t round) {
  RefreshResult out;
  if (!refs.valid)
    throw StaleReferenceCache("refresh called before references were built");
  for (int i = 0; i < prob.nodes(); ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i), round,
                  RngPurpose::reference_refresh);
    if (!rng.next_bernoulli(refs.p_ref)) continue;
    refs.x_tilde[i] = x[i];
    refs.y_tilde[i] = y[i];
    prob.grad_x_full(i, x[i], y[i], refs.grad_x_cache[i]);
    prob.grad_y_full(i, x[i], y[i], refs.grad_y_cache[i]);
    out.grads += prob.dataset().node_samples(i);
    ++out.refreshes;
  }
  return out;
}

}  // namespace saddlesim
