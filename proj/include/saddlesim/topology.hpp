#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace saddlesim {

using Vec = std::vector<double>;

enum class GraphKind { ring, torus2d, complete, path };

GraphKind parse_graph_kind(const std::string& name);
std::string to_string(GraphKind kind);

// Communication graph with Metropolis-Hastings mixing weights and the
// spectral quantities of I-W that every step-size formula consumes.
// Immutable after construction; safe to share across threads.
struct NetworkTopology {
  int m = 0;
  std::vector<std::uint8_t> adjacency;  // m*m, row-major, no self edges
  Vec W;                                // m*m, row-major, symmetric

  // Eigendecomposition of I-W: eigenvalues ascending, eigenvector j stored in
  // column j of iw_eigenvectors (row-major m*m).
  Vec iw_eigenvalues;
  Vec iw_eigenvectors;

  double lambda_max_IW = 0.0;
  double lambda_second_min_IW = 0.0;
  double kappa_g = 1.0;
  // Second-largest |eigenvalue| of W, used by accelerated gossip.
  double lambda2_W = 0.0;

  double w(int i, int j) const { return W[static_cast<std::size_t>(i) * m + j]; }
  bool edge(int i, int j) const {
    return adjacency[static_cast<std::size_t>(i) * m + j] != 0;
  }

  // out[i] = sum_j W_ij in[j]; the direct dense multiply every COMM and
  // gossip round uses. Deterministic accumulation order (ascending j).
  void mix(const std::vector<Vec>& in, std::vector<Vec>& out) const;
};

// Builds a connected topology with Metropolis-Hastings weights
// W_ij = 1/(1+max(deg_i,deg_j)) on edges, W_ii = 1 - sum_j W_ij.
// For torus2d, m is factored into the most-square r x c grid with r,c >= 2.
NetworkTopology build_topology(GraphKind kind, int m);

// Degenerate one-node network (W = [1]); used by the centralized benchmark
// and by tests. Not reachable through build_topology, which requires m >= 2.
NetworkTopology single_node_topology();

struct SpectralReport {
  double max_row_sum_deviation = 0.0;
  double symmetry_deviation = 0.0;
  double min_eigenvalue_W = 0.0;
  double max_eigenvalue_W = 0.0;
  int eigenvalue_one_multiplicity = 0;  // |1 - lambda| <= 1e-9
  bool ok = false;
  std::string summary() const;
};

SpectralReport spectral_check(const NetworkTopology& topo);

}  // namespace saddlesim
