#pragma once

#include <cstdint>
#include <string>

#include "saddlesim/problems.hpp"
#include "saddlesim/scheduler.hpp"

namespace saddlesim {

// Reference saddle point computed by the centralized uncompressed scheme,
// with the gradient-norm statistics the switching formulas consume.
struct BenchmarkSolution {
  Vec x_star, y_star;
  double residual = 0.0;
  double step = 0.0;  // step size the fixed-point residual was measured at
  long long iterations = 0;
  SaddleGradStats grad_stats;
  std::uint64_t config_hash = 0;
};

// Deterministic single-machine proximal gradient descent-ascent on the full
// objective: x <- prox(x - (s/m) grad_x f), y <- prox(y + (s/m) grad_y f),
// run until the prox fixed-point residual drops below tol (checked
// periodically) or `iterations` steps elapse. Throws NotConverged if the
// tolerance is not met.
BenchmarkSolution benchmark_saddle(const SaddleProblem& prob,
                                   long long iterations, double tol);

// Lossless text serialization (hex floats); reload reproduces bit-exactly.
void save_benchmark(const BenchmarkSolution& sol, const std::string& path);
BenchmarkSolution load_benchmark(const std::string& path);

// (1/m) sum_i |z_i - z*|^2, the distance metric every run reports.
double dist_sq_to_saddle(const std::vector<Vec>& x, const std::vector<Vec>& y,
                         const BenchmarkSolution& sol);

}  // namespace saddlesim
