#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"
#include "saddlesim/runner.hpp"
#include "saddlesim/trace.hpp"

using namespace saddlesim;

namespace {

const char* kSmallRun =
    "problem = synthetic\n"
    "synthetic_samples = 80\n"
    "synthetic_dim = 4\n"
    "synthetic_seed = 3\n"
    "lambda = 1.0\n"
    "beta = 1.0\n"
    "radius_x = 4.0\n"
    "radius_y = 1.0\n"
    "topology = ring\n"
    "nodes = 4\n"
    "batches = 2\n"
    "bits = 4\n"
    "algorithm = cdpsvrg\n"
    "iterations = 10\n"
    "seed = 5\n";

std::string temp_path(const char* stem) {
  return std::string("/tmp/saddlesim_test_") + stem;
}

}  // namespace

TEST_CASE("config round-trips losslessly") {
  const RunConfig a = parse_config_text(kSmallRun);
  const std::string s1 = a.serialize();
  const RunConfig b = parse_config_text(s1);
  CHECK(b.serialize() == s1);
  CHECK(b.problem == "synthetic");
  CHECK(b.nodes == 4);
  CHECK(b.iterations == 10);
  CHECK(a.problem_hash() == b.problem_hash());
}

TEST_CASE("malformed configs name the offending key") {
  try {
    parse_config_text("nodez = 4\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("nodez") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("nodes = four\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("problem = logistic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("bits = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("algorithm = sgd\n"), ConfigError);
}

TEST_CASE("trace schema is stable") {
  CHECK(std::string(kTraceHeader) ==
        "iter,oracle,grads,comms,bits,dist_sq,lyapunov,wall_ns");
  RunTrace trace;
  TraceRow row;
  row.iter = 1;
  row.oracle = "gsgo";
  row.grads = 10;
  row.comms = 2;
  row.bits = 100;
  row.dist_sq = 0.5;
  row.lyapunov = std::nan("");
  row.wall_ns = 42;
  trace.rows.push_back(row);
  const std::string csv = trace.to_csv();
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == kTraceHeader);
  std::getline(is, line);
  CHECK(line.rfind("1,gsgo,10,2,100,0.5,nan,", 0) == 0);
}

TEST_CASE("run produces one row per iteration with reconciling counters") {
  const RunConfig cfg = parse_config_text(kSmallRun);
  const RunResult res = execute_run(cfg, nullptr);
  REQUIRE(res.trace.rows.size() == 10);
  const auto q = make_quantizer(4, 4);
  const std::uint64_t per_iter =
      bits_transmitted(4, q, 4) + bits_transmitted(4, q, 4);
  std::uint64_t prev_grads = 0;
  for (std::size_t k = 0; k < res.trace.rows.size(); ++k) {
    const auto& r = res.trace.rows[k];
    CHECK(r.iter == static_cast<long long>(k + 1));
    CHECK(r.comms == 2 * static_cast<std::uint64_t>(r.iter));
    CHECK(r.bits == per_iter * static_cast<std::uint64_t>(r.iter));
    CHECK(r.grads >= prev_grads);
    prev_grads = r.grads;
    CHECK(std::isnan(r.dist_sq));
  }
  // svrgo: 2B per node per step plus N_l per refresh event
  const auto& last = res.trace.rows.back();
  CHECK(last.grads == 4 * 2 * 10 * 10 +
                          20 * static_cast<std::uint64_t>(
                                   res.outcome.totals.refresh_events));
}

TEST_CASE("trace thinning keeps every k-th row and the last") {
  RunConfig cfg = parse_config_text(kSmallRun);
  cfg.iterations = 9;
  cfg.trace_every = 4;
  const RunResult res = execute_run(cfg, nullptr);
  REQUIRE(res.trace.rows.size() == 3);
  CHECK(res.trace.rows[0].iter == 4);
  CHECK(res.trace.rows[1].iter == 8);
  CHECK(res.trace.rows[2].iter == 9);
}

TEST_CASE("benchmark is self-certifying, deterministic, and reloads bit-exactly") {
  RunConfig cfg = parse_config_text(kSmallRun);
  cfg.benchmark_iterations = 60000;
  cfg.benchmark_tol = 1e-9;
  const BenchmarkSolution a = compute_benchmark(cfg);
  CHECK(a.residual <= 1e-9);
  const BenchmarkSolution b = compute_benchmark(cfg);
  CHECK(std::memcmp(a.x_star.data(), b.x_star.data(),
                    a.x_star.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.y_star.data(), b.y_star.data(),
                    a.y_star.size() * sizeof(double)) == 0);

  const std::string path = temp_path("bench");
  save_benchmark(a, path);
  const BenchmarkSolution c = load_benchmark(path);
  CHECK(std::memcmp(a.x_star.data(), c.x_star.data(),
                    a.x_star.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.y_star.data(), c.y_star.data(),
                    a.y_star.size() * sizeof(double)) == 0);
  CHECK(a.residual == c.residual);
  CHECK(a.grad_stats.C_x == c.grad_stats.C_x);
  CHECK(a.config_hash == c.config_hash);
  std::remove(path.c_str());

  RunConfig impossible = cfg;
  impossible.benchmark_tol = 0.0;
  CHECK_THROWS_AS(compute_benchmark(impossible), NotConverged);
}

TEST_CASE("benchmark files guard against mismatched problems") {
  RunConfig cfg = parse_config_text(kSmallRun);
  cfg.benchmark_iterations = 60000;
  cfg.benchmark_tol = 1e-8;
  const BenchmarkSolution sol = compute_benchmark(cfg);
  RunConfig other = cfg;
  other.lambda = 2.0;
  CHECK_THROWS_AS(execute_run(other, &sol), ConfigError);
}

TEST_CASE("dist_sq and lyapunov columns appear when a benchmark is supplied") {
  RunConfig cfg = parse_config_text(kSmallRun);
  cfg.benchmark_iterations = 60000;
  cfg.benchmark_tol = 1e-8;
  const BenchmarkSolution sol = compute_benchmark(cfg);
  const RunResult res = execute_run(cfg, &sol);
  for (const auto& r : res.trace.rows) {
    CHECK(!std::isnan(r.dist_sq));
    CHECK(!std::isnan(r.lyapunov));
    CHECK(r.dist_sq >= 0.0);
    CHECK(r.lyapunov >= 0.0);
  }
}

TEST_CASE("lyapunov vanishes at the limit points and matches a direct evaluator") {
  RunConfig cfg = parse_config_text(kSmallRun);
  cfg.bits = "2";
  RunArtifacts art = build_artifacts(cfg);
  cfg.benchmark_iterations = 60000;
  cfg.benchmark_tol = 1e-8;
  const BenchmarkSolution sol = compute_benchmark(cfg);
  const auto& prob = *art.problem;
  const auto& topo = art.topo;
  const auto& hp = art.hp;

  // build the limit state: x = 1 x*, D = D*, H = H*
  NodeState st = init_node_state(prob, topo, sol.x_star, sol.y_star,
                                 hp.alpha_x, hp.alpha_y);
  std::vector<Vec> gx(4), gy(4);
  Vec gx_mean(4, 0.0), gy_mean(4, 0.0);
  for (int i = 0; i < 4; ++i) {
    prob.grad_x_full(i, sol.x_star, sol.y_star, gx[i]);
    prob.grad_y_full(i, sol.x_star, sol.y_star, gy[i]);
    kernels::axpy(gx_mean, 0.25, gx[i]);
    kernels::axpy(gy_mean, 0.25, gy[i]);
  }
  for (int i = 0; i < 4; ++i) {
    kernels::lincomb(st.Dx[i], -1.0, gx[i], 1.0, gx_mean);
    kernels::lincomb(st.Dy[i], 1.0, gy[i], -1.0, gy_mean);
    kernels::lincomb(st.cx.H[i], 1.0, sol.x_star, -hp.s, gx_mean);
    kernels::lincomb(st.cy.H[i], 1.0, sol.y_star, hp.s, gy_mean);
  }
  init_references(prob, st.x, st.y, hp.p_ref, st.refs);
  const double at_limit = lyapunov(st, hp, 1, prob, topo, sol);
  CHECK(at_limit <= 1e-18);

  // random state: compare against an independently assembled evaluator that
  // forms the dense pseudo-inverse quadratic form coordinate by coordinate
  RngStream rng(77, 0, 0, RngPurpose::synthetic_data);
  for (int i = 0; i < 4; ++i) {
    for (auto& c : st.x[i]) c = rng.next_gaussian();
    for (auto& c : st.y[i]) c = 0.3 * rng.next_gaussian();
    for (auto& c : st.Dx[i]) c = 0.1 * rng.next_gaussian();
    for (auto& c : st.Dy[i]) c = 0.1 * rng.next_gaussian();
    for (auto& c : st.cx.H[i]) c = rng.next_gaussian();
    for (auto& c : st.cy.H[i]) c = 0.3 * rng.next_gaussian();
    for (auto& c : st.refs.x_tilde[i]) c = rng.next_gaussian();
    for (auto& c : st.refs.y_tilde[i]) c = 0.3 * rng.next_gaussian();
  }
  // zero the column sums so D stays in the range of I-W
  for (int k = 0; k < 4; ++k) {
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < 4; ++i) {
      sx += st.Dx[i][k];
      sy += st.Dy[i][k];
    }
    for (int i = 0; i < 4; ++i) {
      st.Dx[i][k] -= sx / 4;
      st.Dy[i][k] -= sy / 4;
    }
  }

  const double got = lyapunov(st, hp, 1, prob, topo, sol);

  // independent evaluator
  const int m = 4;
  std::vector<std::vector<double>> pinv(m, std::vector<double>(m, 0.0));
  for (int j = 0; j < m; ++j) {
    const double lam = topo.iw_eigenvalues[j];
    if (lam <= 1e-12) continue;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        pinv[a][b] += topo.iw_eigenvectors[a * m + j] *
                      topo.iw_eigenvectors[b * m + j] / lam;
  }
  auto quad = [&](const std::vector<Vec>& u) {
    double acc = 0.0;
    for (std::size_t k = 0; k < u[0].size(); ++k)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) acc += u[a][k] * pinv[a][b] * u[b][k];
    return acc;
  };
  auto distsq = [&](const std::vector<Vec>& u, const Vec& c) {
    double acc = 0.0;
    for (const auto& ui : u)
      for (std::size_t k = 0; k < c.size(); ++k)
        acc += (ui[k] - c[k]) * (ui[k] - c[k]);
    return acc;
  };
  std::vector<Vec> ddx(m), ddy(m);
  for (int i = 0; i < m; ++i) {
    ddx[i].resize(4);
    kernels::lincomb(ddx[i], 1.0, st.Dx[i], 1.0, gx[i]);
    kernels::axpy(ddx[i], -1.0, gx_mean);
    ddy[i].resize(4);
    kernels::lincomb(ddy[i], 1.0, st.Dy[i], -1.0, gy[i]);
    kernels::axpy(ddy[i], 1.0, gy_mean);
  }
  Vec hx(4), hy(4);
  kernels::lincomb(hx, 1.0, sol.x_star, -hp.s, gx_mean);
  kernels::lincomb(hy, 1.0, sol.y_star, hp.s, gy_mean);
  const double expect =
      hp.M_x * distsq(st.x, sol.x_star) + hp.M_y * distsq(st.y, sol.y_star) +
      2.0 * hp.s * hp.s / hp.gamma_x * quad(ddx) +
      2.0 * hp.s * hp.s / hp.gamma_y * quad(ddy) +
      std::sqrt(hp.delta) * (distsq(st.cx.H, hx) + distsq(st.cy.H, hy)) +
      hp.c_tilde_x * distsq(st.refs.x_tilde, sol.x_star) +
      hp.c_tilde_y * distsq(st.refs.y_tilde, sol.y_star);
  CHECK(got == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("uncompressed svrg run closes in on the benchmark saddle") {
  RunConfig cfg = parse_config_text(kSmallRun);
  cfg.bits = "off";
  cfg.iterations = 2500;
  cfg.trace_every = 500;
  cfg.benchmark_iterations = 100000;
  cfg.benchmark_tol = 1e-9;
  const BenchmarkSolution sol = compute_benchmark(cfg);
  const RunResult res = execute_run(cfg, &sol);
  REQUIRE(res.trace.rows.size() == 5);
  const double at500 = res.trace.rows[0].dist_sq;
  const double at2500 = res.trace.rows[4].dist_sq;
  CHECK(at2500 * 10.0 <= at500);
  // log dist^2 slope over the sampled rows is negative
  CHECK(at2500 < res.trace.rows[2].dist_sq);
}

TEST_CASE("forced scalar kernels run the full pipeline deterministically") {
  RunConfig cfg = parse_config_text(kSmallRun);
  cfg.kernels = "scalar";
  cfg.iterations = 30;
  const RunResult a = execute_run(cfg, nullptr);
  const RunResult b = execute_run(cfg, nullptr);
  REQUIRE(a.trace.rows.size() == 30);
  for (std::size_t k = 0; k < 30; ++k) {
    CHECK(a.trace.rows[k].grads == b.trace.rows[k].grads);
    CHECK(a.trace.rows[k].bits == b.trace.rows[k].bits);
  }
  for (int i = 0; i < 4; ++i) {
    CHECK(std::memcmp(a.outcome.state.x[i].data(), b.outcome.state.x[i].data(),
                      4 * sizeof(double)) == 0);
    CHECK(std::memcmp(a.outcome.state.y[i].data(), b.outcome.state.y[i].data(),
                      4 * sizeof(double)) == 0);
  }
  saddlesim::kernels::select("auto");
}

TEST_CASE("plain stochastic runs plateau above the variance-reduced level") {
  RunConfig cfg = parse_config_text(kSmallRun);
  cfg.iterations = 4000;
  cfg.trace_every = 4000;
  cfg.benchmark_iterations = 100000;
  cfg.benchmark_tol = 1e-9;
  const BenchmarkSolution sol = compute_benchmark(cfg);

  cfg.algorithm = "gsgo-only";
  const double gsgo_level = execute_run(cfg, &sol).trace.rows.back().dist_sq;
  cfg.algorithm = "cdpsvrg";
  const double svrg_level = execute_run(cfg, &sol).trace.rows.back().dist_sq;
  // the plain oracle saturates at its variance floor, the variance-reduced
  // one keeps contracting
  CHECK(svrg_level < gsgo_level);
  CHECK(svrg_level < 1e-6);
}

TEST_CASE("lyapunov at a single node has no multiplier terms") {
  auto prob = robust_logistic(synthetic_logistic_data(30, 3, 4), 1.0, 1.0, 2.0,
                              0.5);
  const auto topo = single_node_topology();
  const auto sol = benchmark_saddle(*prob, 100000, 1e-8);
  HyperParams hp;
  hp.M_x = hp.M_y = 0.9;
  hp.s = 0.05;
  hp.gamma_x = hp.gamma_y = 0.25;
  hp.delta = 0.0;
  hp.c_tilde_x = hp.c_tilde_y = 0.0;
  NodeState st = init_node_state(*prob, topo, Vec(3, 0.5), Vec(3, 0.1),
                                 0.5, 0.5);
  st.Dx[0] = Vec(3, 7.0);  // would blow up if the D-terms were counted
  st.refs.x_tilde = st.x;
  st.refs.y_tilde = st.y;
  st.refs.valid = true;
  const double phi = lyapunov(st, hp, 1, *prob, topo, sol);
  Vec dx(3), dy(3);
  kernels::lincomb(dx, 1.0, st.x[0], -1.0, sol.x_star);
  kernels::lincomb(dy, 1.0, st.y[0], -1.0, sol.y_star);
  const double expect = 0.9 * kernels::sumsq(dx) + 0.9 * kernels::sumsq(dy);
  CHECK(phi == doctest::Approx(expect).epsilon(1e-12));
}
