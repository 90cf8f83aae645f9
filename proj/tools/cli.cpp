// Command-line driver: run / benchmark / params / validate on a config file.
// Exit codes: 0 success, 1 config error, 2 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "saddlesim/errors.hpp"
#include "saddlesim/runner.hpp"
#include "saddlesim/scheduler.hpp"

namespace {

using namespace saddlesim;

struct Overrides {
  std::string out;
  long long trace_every = -1;
  long long seed = -1;
};

RunConfig load_config(const std::string& path, const Overrides& ov) {
  RunConfig cfg = parse_config_file(path);
  if (!ov.out.empty()) cfg.out = ov.out;
  if (ov.trace_every > 0) cfg.trace_every = ov.trace_every;
  if (ov.seed >= 0) cfg.seed = static_cast<std::uint64_t>(ov.seed);
  return cfg;
}

int cmd_run(const RunConfig& cfg) {
  BenchmarkSolution bench;
  bool have_bench = false;
  if (!cfg.benchmark_path.empty()) {
    bench = load_benchmark(cfg.benchmark_path);
    have_bench = true;
  }
  RunResult res = execute_run(cfg, have_bench ? &bench : nullptr);
  res.trace.write_csv(cfg.out);
  std::printf("wrote %zu trace rows to %s\n", res.trace.rows.size(),
              cfg.out.c_str());
  if (res.outcome.switch_iter >= 0)
    std::printf("switched to svrgo at iteration %lld\n",
                res.outcome.switch_iter);
  return 0;
}

int cmd_benchmark(const RunConfig& cfg) {
  BenchmarkSolution sol = compute_benchmark(cfg);
  save_benchmark(sol, cfg.out);
  std::printf("benchmark converged: residual %.3e after %lld iterations -> %s\n",
              sol.residual, sol.iterations, cfg.out.c_str());
  return 0;
}

int cmd_params(const RunConfig& cfg) {
  HyperParams hp;
  if (cfg.problem == "manual") {
    const NetworkTopology topo =
        build_topology(parse_graph_kind(cfg.topology), cfg.nodes);
    const double p_ref = cfg.p_ref > 0.0 ? cfg.p_ref : 1.0 / cfg.batches;
    const double delta =
        cfg.bits == "off"
            ? 0.0
            : make_quantizer(static_cast<int>(std::stoll(cfg.bits)), 1).delta;
    hp = derive_hyperparams(manual_constants(cfg), cfg.batches,
                            1.0 / cfg.batches, topo, delta, p_ref);
  } else {
    hp = build_artifacts(cfg).hp;
  }

  std::printf("%-14s %-14s %-14s\n", "param", "phase0", "phase1");
  auto row = [](const char* name, double a, double b) {
    std::printf("%-14s %-14.6g %-14.6g\n", name, a, b);
  };
  row("s", hp.s0, hp.s);
  row("b_x", hp.b_x0, hp.b_x);
  row("b_y", hp.b_y0, hp.b_y);
  row("alpha_x", hp.alpha_x0, hp.alpha_x);
  row("alpha_y", hp.alpha_y0, hp.alpha_y);
  row("gamma_x", hp.gamma_x0, hp.gamma_x);
  row("gamma_y", hp.gamma_y0, hp.gamma_y);
  row("M_x", hp.M_x0, hp.M_x);
  row("M_y", hp.M_y0, hp.M_y);
  row("rho", hp.rho0, hp.rho);
  std::printf("%-14s %-14.6g\n", "c_tilde_x", hp.c_tilde_x);
  std::printf("%-14s %-14.6g\n", "c_tilde_y", hp.c_tilde_y);
  std::printf("%-14s %-14.6g\n", "delta", hp.delta);
  std::printf("%-14s %-14.6g\n", "p_ref", hp.p_ref);
  std::printf("%-14s %-14.6g\n", "kappa_f", hp.kappa_f);
  std::printf("%-14s %-14.6g\n", "kappa_g", hp.kappa_g);
  std::printf("%-14s %lld\n", "T0_prime", t0_prime(hp.rho0));

  if (!cfg.benchmark_path.empty()) {
    const BenchmarkSolution bench = load_benchmark(cfg.benchmark_path);
    const SwitchConstants sc = compute_cmax_c1_ve(hp, bench.grad_stats);
    std::printf("%-14s %-14.6g\n", "C_max", sc.C_max);
    std::printf("%-14s %-14.6g\n", "C_1", sc.C_1);
    std::printf("%-14s %-14.6g\n", "V_e", sc.V_e);
    try {
      RunArtifacts art = build_artifacts(cfg);
      NodeState init = init_node_state(*art.problem, art.topo, art.x0, art.y0,
                                       hp.alpha_x0, hp.alpha_y0);
      const double phi0 =
          lyapunov(init, hp, 0, *art.problem, art.topo, bench);
      const SwitchPlan plan = theoretical_switch(cfg.epsilon, phi0, hp, sc);
      std::printf("%-14s %-14.6g\n", "Phi0", phi0);
      std::printf("%-14s %-14.6g\n", "epsilon0*", plan.epsilon0);
      std::printf("%-14s %lld\n", "T0", plan.T0);
      std::printf("%-14s %-14.6g\n", "T(eps)", plan.T_epsilon);
    } catch (const DegenerateVariance& e) {
      std::printf("switch plan: %s\n", e.what());
    }
  }
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  const NetworkTopology topo =
      build_topology(parse_graph_kind(cfg.topology), cfg.nodes);
  const SpectralReport rep = spectral_check(topo);
  std::printf("topology %s(%d): %s\n", cfg.topology.c_str(), cfg.nodes,
              rep.summary().c_str());
  if (!rep.ok) return 2;
  HyperParams hp;
  if (cfg.problem == "manual") {
    const double p_ref = cfg.p_ref > 0.0 ? cfg.p_ref : 1.0 / cfg.batches;
    const double delta =
        cfg.bits == "off"
            ? 0.0
            : make_quantizer(static_cast<int>(std::stoll(cfg.bits)), 1).delta;
    hp = derive_hyperparams(manual_constants(cfg), cfg.batches,
                            1.0 / cfg.batches, topo, delta, p_ref);
  } else {
    hp = build_artifacts(cfg).hp;
  }
  std::printf("hyperparameters feasible: rho0 %.6g <= rho %.6g\n", hp.rho0,
              hp.rho);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decentralized compressed saddle-point simulator"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::string mode;
  for (const char* name : {"run", "benchmark", "params", "validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "run config file")->required();
    sub->add_option("--out", ov.out, "output path override");
    sub->add_option("--trace-every", ov.trace_every, "trace thinning override");
    sub->add_option("--seed", ov.seed, "seed override");
    sub->callback([&mode, name] { mode = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const saddlesim::RunConfig cfg = load_config(config_path, ov);
    if (mode == "run") return cmd_run(cfg);
    if (mode == "benchmark") return cmd_benchmark(cfg);
    if (mode == "params") return cmd_params(cfg);
    return cmd_validate(cfg);
  } catch (const saddlesim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const saddlesim::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
