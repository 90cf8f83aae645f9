#include "saddlesim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"

namespace saddlesim {

ProblemConstants manual_constants(const RunConfig& cfg) {
  ProblemConstants c;
  c.L_xx = cfg.L_xx;
  c.L_yy = cfg.L_yy;
  c.L_xy = cfg.L_xy;
  c.L_yx = cfg.L_yx;
  c.L = std::max({c.L_xx, c.L_yy, c.L_xy, c.L_yx});
  c.mu_x = cfg.mu_x;
  c.mu_y = cfg.mu_y;
  c.mu = std::min(c.mu_x, c.mu_y);
  c.kappa_f = c.L / c.mu;
  return c;
}

RunArtifacts build_artifacts(const RunConfig& cfg) {
  if (cfg.problem == "manual")
    throw ConfigError("problem 'manual' supports only params/validate");

  kernels::select(cfg.kernels);

  RunArtifacts art;
  PartitionedDataset data;
  if (cfg.problem == "synthetic") {
    data = synthetic_logistic_data(cfg.synthetic_samples, cfg.synthetic_dim,
                                   cfg.synthetic_seed);
  } else {
    data = load_libsvm(cfg.dataset);
  }
  data = partition(std::move(data), cfg.nodes, cfg.batches, cfg.seed);

  if (cfg.problem == "auc") {
    art.problem = auc_maximization(std::move(data), cfg.lambda, cfg.radius_x,
                                   cfg.radius_y);
  } else {
    art.problem = robust_logistic(std::move(data), cfg.lambda, cfg.beta,
                                  cfg.radius_x, cfg.radius_y, cfg.mu_per_node);
  }

  if (cfg.nodes < 2)
    throw ConfigError("a decentralized run needs nodes >= 2");
  art.topo = build_topology(parse_graph_kind(cfg.topology), cfg.nodes);
  const std::size_t dmax = static_cast<std::size_t>(
      std::max(art.problem->dim_x(), art.problem->dim_y()));
  art.quant = cfg.bits == "off"
                  ? identity_quantizer()
                  : make_quantizer(static_cast<int>(std::stoll(cfg.bits)), dmax);
  art.p_ref = cfg.p_ref > 0.0 ? cfg.p_ref : 1.0 / cfg.batches;
  art.dist = SamplingDistribution::uniform(cfg.nodes, cfg.batches);
  art.hp = derive_hyperparams(art.problem->constants(), cfg.batches,
                              art.dist.p_min, art.topo, art.quant.delta,
                              art.p_ref);

  // Initial point: seeded Gaussian direction at half the feasible radius.
  RngStream rng(cfg.seed, 0, 0, RngPurpose::init_point);
  art.x0.resize(art.problem->dim_x());
  for (auto& v : art.x0) v = rng.next_gaussian();
  const double xn = std::sqrt(kernels::sumsq(art.x0));
  if (xn > 0.0)
    for (auto& v : art.x0) v *= 0.5 * cfg.radius_x / xn;
  art.y0.resize(art.problem->dim_y());
  for (auto& v : art.y0) v = rng.next_gaussian();
  const double yn = std::sqrt(kernels::sumsq(art.y0));
  if (yn > 0.0)
    for (auto& v : art.y0) v *= 0.5 * cfg.radius_y / yn;
  return art;
}

BenchmarkSolution compute_benchmark(const RunConfig& cfg) {
  RunArtifacts art = build_artifacts(cfg);
  BenchmarkSolution sol = benchmark_saddle(*art.problem, cfg.benchmark_iterations,
                                           cfg.benchmark_tol);
  sol.config_hash = cfg.problem_hash();
  return sol;
}

RunResult execute_run(const RunConfig& cfg, const BenchmarkSolution* bench) {
  RunArtifacts art = build_artifacts(cfg);
  if (bench && bench->config_hash != cfg.problem_hash())
    throw ConfigError("benchmark file does not match this problem config");

  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  const auto sink = [&](const IterationRecord& rec) {
    if (rec.iter % cfg.trace_every != 0 && rec.iter != cfg.iterations) return;
    TraceRow row;
    row.iter = rec.iter;
    row.oracle = rec.oracle == OracleKind::gsgo ? "gsgo" : "svrgo";
    row.grads = rec.cumulative.grads;
    row.comms = rec.cumulative.comms;
    row.bits = rec.cumulative.bits;
    if (bench) {
      row.dist_sq = dist_sq_to_saddle(rec.state->x, rec.state->y, *bench);
      row.lyapunov = lyapunov(*rec.state, art.hp, rec.phase, *art.problem,
                              art.topo, *bench);
    } else {
      row.dist_sq = std::nan("");
      row.lyapunov = std::nan("");
    }
    row.wall_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - start)
            .count());
    result.trace.rows.push_back(row);
  };

  if (cfg.algorithm == "cdpsvrg") {
    result.outcome =
        run_cdpsvrg(*art.problem, art.topo, art.quant, art.hp, art.dist,
                    art.x0, art.y0, cfg.iterations, cfg.seed, sink);
  } else if (cfg.algorithm == "gsgo-only") {
    result.outcome = run_gsgo(*art.problem, art.topo, art.quant, art.hp,
                              art.dist, art.x0, art.y0, cfg.iterations,
                              cfg.seed, sink);
  } else {
    SwitchSpec sw;
    sw.mode = cfg.switching == "theoretical" ? SwitchSpec::Mode::theoretical
                                             : SwitchSpec::Mode::practical;
    sw.t0 = cfg.t0;
    sw.epsilon = cfg.epsilon;
    sw.threshold = cfg.threshold;
    sw.gossip_iters = cfg.gossip_iters;
    result.outcome =
        run_cdpssg(*art.problem, art.topo, art.quant, art.hp, art.dist, art.x0,
                   art.y0, cfg.iterations, sw, cfg.seed, sink);
  }
  return result;
}

}  // namespace saddlesim
