#include "saddlesim/topology.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"

namespace saddlesim {

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "ring") return GraphKind::ring;
  if (name == "torus2d") return GraphKind::torus2d;
  if (name == "complete") return GraphKind::complete;
  if (name == "path") return GraphKind::path;
  throw ConfigError("unknown topology kind: " + name);
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::ring: return "ring";
    case GraphKind::torus2d: return "torus2d";
    case GraphKind::complete: return "complete";
    case GraphKind::path: return "path";
  }
  return "?";
}

void NetworkTopology::mix(const std::vector<Vec>& in,
                          std::vector<Vec>& out) const {
  const std::size_t d = in.empty() ? 0 : in[0].size();
  out.resize(in.size());
  for (int i = 0; i < m; ++i) {
    out[i].assign(d, 0.0);
    for (int j = 0; j < m; ++j) {
      const double wij = w(i, j);
      if (wij == 0.0) continue;
      kernels::axpy(out[i], wij, in[j]);
    }
  }
}

namespace {

std::vector<std::uint8_t> build_adjacency(GraphKind kind, int m) {
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(m) * m, 0);
  auto connect = [&](int i, int j) {
    if (i == j) return;
    adj[static_cast<std::size_t>(i) * m + j] = 1;
    adj[static_cast<std::size_t>(j) * m + i] = 1;
  };
  switch (kind) {
    case GraphKind::ring:
      for (int i = 0; i < m; ++i) connect(i, (i + 1) % m);
      break;
    case GraphKind::path:
      for (int i = 0; i + 1 < m; ++i) connect(i, i + 1);
      break;
    case GraphKind::complete:
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) connect(i, j);
      break;
    case GraphKind::torus2d: {
      // Most-square factorization r*c = m with r,c >= 2.
      int r = 0, c = 0;
      for (int a = 2; a * a <= m; ++a) {
        if (m % a == 0 && m / a >= 2) r = a, c = m / a;
      }
      if (r == 0)
        throw UnconnectableGraph("torus2d needs m = r*c with r,c >= 2; m=" +
                                 std::to_string(m));
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
          const int node = i * c + j;
          connect(node, i * c + (j + 1) % c);
          connect(node, ((i + 1) % r) * c + j);
        }
      }
      break;
    }
  }
  return adj;
}

}  // namespace

NetworkTopology build_topology(GraphKind kind, int m) {
  if (m < 2) throw InvalidSize("topology needs m >= 2, got " + std::to_string(m));

  NetworkTopology topo;
  topo.m = m;
  topo.adjacency = build_adjacency(kind, m);

  std::vector<int> degree(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) degree[i] += topo.adjacency[static_cast<std::size_t>(i) * m + j];

  topo.W.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    double off = 0.0;
    for (int j = 0; j < m; ++j) {
      if (!topo.edge(i, j)) continue;
      const double wij = 1.0 / (1.0 + std::max(degree[i], degree[j]));
      topo.W[static_cast<std::size_t>(i) * m + j] = wij;
      off += wij;
    }
    topo.W[static_cast<std::size_t>(i) * m + i] = 1.0 - off;
  }

  Eigen::MatrixXd iw(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) iw(i, j) = (i == j ? 1.0 : 0.0) - topo.w(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(iw);
  if (es.info() != Eigen::Success)
    throw NumericError("eigendecomposition of I-W failed");

  topo.iw_eigenvalues.resize(m);
  topo.iw_eigenvectors.resize(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    topo.iw_eigenvalues[j] = es.eigenvalues()(j);
    for (int i = 0; i < m; ++i)
      topo.iw_eigenvectors[static_cast<std::size_t>(i) * m + j] =
          es.eigenvectors()(i, j);
  }
  topo.lambda_max_IW = topo.iw_eigenvalues[m - 1];
  topo.lambda_second_min_IW = topo.iw_eigenvalues[1];
  if (topo.lambda_second_min_IW <= 1e-12)
    throw UnconnectableGraph("graph is not connected (lambda_{m-1}(I-W) = 0)");
  topo.kappa_g = topo.lambda_max_IW / topo.lambda_second_min_IW;

  double l2 = 0.0;
  for (int j = 1; j < m; ++j)
    l2 = std::max(l2, std::abs(1.0 - topo.iw_eigenvalues[j]));
  topo.lambda2_W = l2;
  return topo;
}

NetworkTopology single_node_topology() {
  NetworkTopology topo;
  topo.m = 1;
  topo.adjacency = {0};
  topo.W = {1.0};
  topo.iw_eigenvalues = {0.0};
  topo.iw_eigenvectors = {1.0};
  topo.lambda_max_IW = 0.0;
  topo.lambda_second_min_IW = 0.0;
  topo.kappa_g = 1.0;
  topo.lambda2_W = 0.0;
  return topo;
}

SpectralReport spectral_check(const NetworkTopology& topo) {
  SpectralReport rep;
  const int m = topo.m;
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) {
      row += topo.w(i, j);
      rep.symmetry_deviation =
          std::max(rep.symmetry_deviation, std::abs(topo.w(i, j) - topo.w(j, i)));
    }
    rep.max_row_sum_deviation =
        std::max(rep.max_row_sum_deviation, std::abs(row - 1.0));
  }
  rep.min_eigenvalue_W = 1.0 - topo.iw_eigenvalues[m - 1];
  rep.max_eigenvalue_W = 1.0 - topo.iw_eigenvalues[0];
  rep.eigenvalue_one_multiplicity = 0;
  for (double lam : topo.iw_eigenvalues)
    if (std::abs(lam) <= 1e-9) ++rep.eigenvalue_one_multiplicity;
  rep.ok = rep.max_row_sum_deviation <= 1e-12 && rep.symmetry_deviation == 0.0 &&
           rep.min_eigenvalue_W > -1.0 && rep.eigenvalue_one_multiplicity == 1;
  return rep;
}

std::string SpectralReport::summary() const {
  std::ostringstream os;
  os << "row-sum dev " << max_row_sum_deviation << ", symmetry dev "
     << symmetry_deviation << ", eig(W) in [" << min_eigenvalue_W << ", "
     << max_eigenvalue_W << "], multiplicity(1) " << eigenvalue_one_multiplicity
     << (ok ? " [ok]" : " [violation]");
  return os.str();
}

}  // namespace saddlesim
