#pragma once

#include "saddlesim/benchmark.hpp"
#include "saddlesim/hyperparams.hpp"
#include "saddlesim/solver.hpp"

namespace saddlesim {

// Weighted squared distance of all iterate blocks from their limit points:
// the quantity the convergence analysis contracts. Phase 0 omits the
// reference terms; phase 1 weighs with the phase-1 constants and adds
// c~_x |x~ - 1 x*|^2 + c~_y |y~ - 1 y*|^2. Diagnostic only.
double lyapunov(const NodeState& state, const HyperParams& hp, int phase,
                const SaddleProblem& prob, const NetworkTopology& topo,
                const BenchmarkSolution& sol);

}  // namespace saddlesim
