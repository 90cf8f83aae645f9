#pragma once

#include <cstdint>
#include <vector>

#include "saddlesim/problems.hpp"
#include "saddlesim/rng.hpp"

namespace saddlesim {

// Batch sampling probabilities P_i, one distribution per node. All entries
// positive so every batch can be drawn.
struct SamplingDistribution {
  std::vector<Vec> probs;  // per node, length n
  std::vector<Vec> cdf;    // per node, length n
  double p_min = 0.0;

  static SamplingDistribution uniform(int m, int n);
  static SamplingDistribution from_probs(std::vector<Vec> probs);

  double prob(int node, int batch) const { return probs[node][batch]; }
  int sample(int node, RngStream& rng) const;
};

// SVRG reference points with their cached node-level full gradients. The
// caches are refreshed atomically with the points.
struct ReferenceState {
  std::vector<Vec> x_tilde, y_tilde;
  std::vector<Vec> grad_x_cache, grad_y_cache;
  double p_ref = 1.0;
  bool valid = false;
};

// Sets every reference to the current iterate and rebuilds the caches.
// Returns the gradient evaluations charged (sum of node sample counts).
std::uint64_t init_references(const SaddleProblem& prob,
                              const std::vector<Vec>& x,
                              const std::vector<Vec>& y, double p_ref,
                              ReferenceState& refs);

struct OracleResult {
  Vec gx, gy;
  std::uint64_t grads = 0;  // gradient evaluations, in samples
};

// Importance-weighted single-batch gradient: (1/(n p_il)) grad f_il(z_i).
OracleResult gsgo(const SaddleProblem& prob, const SamplingDistribution& dist,
                  int node, const Vec& x, const Vec& y, RngStream& rng);

// Variance-reduced gradient
// (1/(n p_il)) (grad f_il(z_i) - grad f_il(z~_i)) + grad f_i(z~_i).
// Throws StaleReferenceCache when the caches were never built.
OracleResult svrgo(const SaddleProblem& prob, const SamplingDistribution& dist,
                   const ReferenceState& refs, int node, const Vec& x,
                   const Vec& y, RngStream& rng);

// One Bernoulli(p_ref) draw per node: on success the node's reference moves
// to its current iterate and the cached full gradients are recomputed (cost
// charged here). Returns (gradient evaluations, refresh events).
struct RefreshResult {
  std::uint64_t grads = 0;
  int refreshes = 0;
};
RefreshResult maybe_refresh_reference(const SaddleProblem& prob,
                                      ReferenceState& refs,
                                      const std::vector<Vec>& x,
                                      const std::vector<Vec>& y,
                                      std::uint64_t seed, std::uint64_t round);

}  // namespace saddlesim
