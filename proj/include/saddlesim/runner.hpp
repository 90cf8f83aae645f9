#pragma once

#include <memory>

#include "saddlesim/benchmark.hpp"
#include "saddlesim/config.hpp"
#include "saddlesim/lyapunov.hpp"
#include "saddlesim/solver.hpp"
#include "saddlesim/trace.hpp"

namespace saddlesim {

// Everything a run needs, materialized from a config.
struct RunArtifacts {
  std::unique_ptr<SaddleProblem> problem;
  NetworkTopology topo;
  Quantizer quant;
  HyperParams hp;
  SamplingDistribution dist;
  Vec x0, y0;
  double p_ref = 1.0;
};

// Builds dataset, problem, topology, quantizer and derived parameters.
// Throws ConfigError for `manual` problems, which only support params/validate.
RunArtifacts build_artifacts(const RunConfig& cfg);

// Constants of a `manual` config (params/validate without data).
ProblemConstants manual_constants(const RunConfig& cfg);

// Runs the centralized benchmark for the config's problem and stamps the
// problem hash.
BenchmarkSolution compute_benchmark(const RunConfig& cfg);

struct RunResult {
  RunOutcome outcome;
  RunTrace trace;
};

// Executes the configured algorithm; when a benchmark is supplied the trace
// rows carry dist_sq and the phase Lyapunov value, otherwise NaN.
RunResult execute_run(const RunConfig& cfg, const BenchmarkSolution* bench);

}  // namespace saddlesim
