#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "saddlesim/comm.hpp"
#include "saddlesim/hyperparams.hpp"
#include "saddlesim/oracles.hpp"
#include "saddlesim/problems.hpp"
#include "saddlesim/quantizer.hpp"
#include "saddlesim/scheduler.hpp"
#include "saddlesim/topology.hpp"

namespace saddlesim {

// Full per-node iterate state of the primal-dual scheme. The consensus
// multipliers Dx, Dy sum to zero across nodes at all times: they start at
// zero and every increment has zero column sum.
struct NodeState {
  std::vector<Vec> x, y;
  std::vector<Vec> Dx, Dy;
  CommState cx, cy;  // shadow states for the primal and dual COMM rounds
  ReferenceState refs;
};

// Replicates (x0, y0) on every node, D = 0, H = x0, Hw = W-mix of H.
NodeState init_node_state(const SaddleProblem& prob,
                          const NetworkTopology& topo, const Vec& x0,
                          const Vec& y0, double alpha_x, double alpha_y);

enum class OracleKind { gsgo, svrgo };

struct StepCounters {
  std::uint64_t grads = 0;
  std::uint64_t comms = 0;
  std::uint64_t bits = 0;
  int refresh_events = 0;
};

// One synchronous primal-dual round: oracle gradients at the current
// iterates, one COMM round per variable block, then the multiplier and prox
// updates. `round` keys the per-node randomness. With an svrgo oracle the
// Bernoulli reference refresh runs at the pre-step iterate after the
// gradients are drawn.
void ipdhg_step(NodeState& state, const HyperParams& hp, int phase,
                OracleKind oracle, const SaddleProblem& prob,
                const SamplingDistribution& dist, const NetworkTopology& topo,
                const Quantizer& q, std::uint64_t seed, std::uint64_t round,
                StepCounters& counters);

struct IterationRecord {
  long long iter = 0;  // 1-based, after the step
  OracleKind oracle = OracleKind::gsgo;
  int phase = 0;
  StepCounters cumulative;
  const NodeState* state = nullptr;
};
using TraceSink = std::function<void(const IterationRecord&)>;

struct RunOutcome {
  NodeState state;
  StepCounters totals;
  long long switch_iter = -1;  // first svrgo iteration, -1 if never switched
  std::optional<SwitchPlan> plan;
};

// Pure variance-reduced run (the switching scheme with T0 = 0).
RunOutcome run_cdpsvrg(const SaddleProblem& prob, const NetworkTopology& topo,
                       const Quantizer& q, const HyperParams& hp,
                       const SamplingDistribution& dist, const Vec& x0,
                       const Vec& y0, long long T, std::uint64_t seed,
                       const TraceSink& sink = {});

// Plain stochastic-gradient run (no switch, phase-0 parameters throughout).
RunOutcome run_gsgo(const SaddleProblem& prob, const NetworkTopology& topo,
                    const Quantizer& q, const HyperParams& hp,
                    const SamplingDistribution& dist, const Vec& x0,
                    const Vec& y0, long long T, std::uint64_t seed,
                    const TraceSink& sink = {});

struct SwitchSpec {
  enum class Mode { theoretical, practical } mode = Mode::theoretical;
  long long t0 = 0;           // theoretical mode
  double epsilon = 1e-4;      // practical mode
  double threshold = 1e-8;    // practical mode
  int gossip_iters = 20;      // practical mode
};

// The switching scheme: phase-0 oracle and parameters up to the switching
// point, then references initialized at the switch iterate (full-gradient
// cost charged) and phase-1 updates for the remainder. The run may end in
// phase 0 when T is smaller than the switching point.
RunOutcome run_cdpssg(const SaddleProblem& prob, const NetworkTopology& topo,
                      const Quantizer& q, const HyperParams& hp,
                      const SamplingDistribution& dist, const Vec& x0,
                      const Vec& y0, long long T, const SwitchSpec& sw,
                      std::uint64_t seed, const TraceSink& sink = {});

}  // namespace saddlesim
