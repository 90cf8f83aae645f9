#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "saddlesim/topology.hpp"

namespace saddlesim {

// Flat key-value run description (INI-style, one run per file). Parsing
// validates every field; serialize() round-trips losslessly.
struct RunConfig {
  // problem
  std::string problem = "synthetic";  // logistic | auc | synthetic | manual
  std::string dataset;                // libsvm path (logistic/auc)
  std::size_t synthetic_samples = 200;
  std::size_t synthetic_dim = 5;
  std::uint64_t synthetic_seed = 1;
  double lambda = 1.0;
  double beta = 1.0;
  double radius_x = 100.0;
  double radius_y = 1.0;
  bool mu_per_node = false;
  // manual problem constants (params/validate only)
  double L_xx = 1.0, L_yy = 1.0, L_xy = 1.0, L_yx = 1.0;
  double mu_x = 1.0, mu_y = 1.0;

  // network
  std::string topology = "ring";
  int nodes = 4;
  int batches = 1;

  // compression: "off" or a bit count
  std::string bits = "4";

  // algorithm
  std::string algorithm = "cdpsvrg";  // cdpsvrg | cdpssg | gsgo-only
  long long iterations = 100;
  double epsilon = 1e-4;
  std::string switching = "practical";  // theoretical | practical
  long long t0 = 0;
  double threshold = 1e-8;
  int gossip_iters = 20;
  double p_ref = 0.0;  // 0 means the 1/n default
  std::uint64_t seed = 0;
  long long trace_every = 1;
  std::string out = "trace.csv";
  std::string benchmark_path;  // optional; enables dist_sq / lyapunov columns
  long long benchmark_iterations = 50000;
  double benchmark_tol = 1e-8;
  std::string kernels = "auto";  // auto | scalar

  std::string serialize() const;
  // FNV-1a over the problem-defining fields; guards benchmark files against
  // mismatched problems.
  std::uint64_t problem_hash() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace saddlesim
