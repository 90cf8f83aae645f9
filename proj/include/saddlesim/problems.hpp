#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "saddlesim/topology.hpp"

namespace saddlesim {

// Sparse samples in CSR layout. After partition() the rows are ordered so
// node blocks and their batches are contiguous.
struct PartitionedDataset {
  std::size_t num_samples = 0;
  std::size_t dim = 0;
  std::vector<std::size_t> row_ptr;  // num_samples + 1
  std::vector<std::uint32_t> col;
  Vec val;
  std::vector<std::int8_t> label;  // -1 or +1

  int m = 1;
  int n = 1;
  std::vector<std::size_t> node_begin;                // m+1 sample offsets
  std::vector<std::vector<std::size_t>> batch_begin;  // per node, n+1 offsets
  double positive_fraction = 0.0;

  std::size_t node_samples(int node) const {
    return node_begin[node + 1] - node_begin[node];
  }
  std::size_t batch_samples(int node, int batch) const {
    return batch_begin[node][batch + 1] - batch_begin[node][batch];
  }
  std::size_t sample_begin(int node, int batch) const {
    return node_begin[node] + batch_begin[node][batch];
  }
};

// Sparse `label idx:val ...` text format, 1-based indices; labels are mapped
// to {-1,+1} (0 becomes -1). Throws ParseError with the line number,
// EmptyDataset for a file with no samples.
PartitionedDataset load_libsvm(const std::string& path);
PartitionedDataset parse_libsvm_text(const std::string& text);

// Seeded shuffle, then m contiguous near-equal node blocks, each split into n
// near-equal batches; remainder samples go one per block from the front.
PartitionedDataset partition(PartitionedDataset dataset, int m, int n,
                             std::uint64_t seed);

// Gaussian features (unit expected squared norm), logistic labels from a
// fixed random separator. Deterministic in the seed.
PartitionedDataset synthetic_logistic_data(std::size_t num_samples,
                                           std::size_t dim, std::uint64_t seed);

// v unchanged when inside the ball, otherwise scaled onto the boundary.
void project_ball(Vec& v, double radius);

struct ProblemConstants {
  double L_xx = 0.0, L_yy = 0.0, L_xy = 0.0, L_yx = 0.0;
  double L = 0.0;
  double mu_x = 0.0, mu_y = 0.0, mu = 0.0;
  double kappa_f = 1.0;
};

// Per-node finite-sum saddle problem f_i = (1/n) sum_l f_il with ball
// indicator non-smooth terms. Immutable and shareable; gradient evaluation is
// pure.
class SaddleProblem {
 public:
  virtual ~SaddleProblem() = default;

  int dim_x() const { return d_x_; }
  int dim_y() const { return d_y_; }
  int nodes() const { return data_.m; }
  int batches() const { return data_.n; }
  double radius_x() const { return radius_x_; }
  double radius_y() const { return radius_y_; }
  const ProblemConstants& constants() const { return constants_; }
  const PartitionedDataset& dataset() const { return data_; }

  // Gradients of the batch function f_il at z = (x, y); out is overwritten.
  virtual void grad_x(int node, int batch, const Vec& x, const Vec& y,
                      Vec& out) const = 0;
  virtual void grad_y(int node, int batch, const Vec& x, const Vec& y,
                      Vec& out) const = 0;
  // f_il(x, y); used by the finite-difference checks.
  virtual double batch_value(int node, int batch, const Vec& x,
                             const Vec& y) const = 0;

  // Node-level full gradients (1/n) sum_l of the batch gradients.
  void grad_x_full(int node, const Vec& x, const Vec& y, Vec& out) const;
  void grad_y_full(int node, const Vec& x, const Vec& y, Vec& out) const;

  // prox of the ball indicators; the step is part of the contract but the
  // projection does not depend on it.
  void prox_x(Vec& v, double step) const;
  void prox_y(Vec& v, double step) const;

 protected:
  SaddleProblem(PartitionedDataset data, int d_x, int d_y, double radius_x,
                double radius_y)
      : data_(std::move(data)),
        d_x_(d_x),
        d_y_(d_y),
        radius_x_(radius_x),
        radius_y_(radius_y) {}

  PartitionedDataset data_;
  int d_x_;
  int d_y_;
  double radius_x_;
  double radius_y_;
  ProblemConstants constants_;
};

// min_x max_y (1/N) sum log(1+exp(-b x'(a+y))) + lambda/2 |x|^2 - beta/2 |y|^2
// over l2 balls. mu_per_node selects the per-node strong convexity lambda/m
// instead of the reported lambda (same for beta).
std::unique_ptr<SaddleProblem> robust_logistic(PartitionedDataset dataset,
                                               double lambda, double beta,
                                               double radius_x, double radius_y,
                                               bool mu_per_node = false);

// AUC maximization; primal is (x, u, v) of dimension d+2, dual is scalar.
// Throws SingleClassDataset when all labels agree.
std::unique_ptr<SaddleProblem> auc_maximization(PartitionedDataset dataset,
                                                double lambda, double radius_x,
                                                double radius_y);

}  // namespace saddlesim
