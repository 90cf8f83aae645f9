#include "saddlesim/benchmark.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "saddlesim/errors.hpp"
#include "saddlesim/kernels.hpp"

namespace saddlesim {

namespace {

// Mean over nodes of the node-level full gradients.
void mean_full_gradients(const SaddleProblem& prob, const Vec& x, const Vec& y,
                         Vec& gx, Vec& gy) {
  const int m = prob.nodes();
  gx.assign(prob.dim_x(), 0.0);
  gy.assign(prob.dim_y(), 0.0);
  Vec tmp;
  for (int i = 0; i < m; ++i) {
    prob.grad_x_full(i, x, y, tmp);
    kernels::axpy(gx, 1.0 / m, tmp);
    prob.grad_y_full(i, x, y, tmp);
    kernels::axpy(gy, 1.0 / m, tmp);
  }
}

double fixed_point_residual(const SaddleProblem& prob, const Vec& x,
                            const Vec& y, double s) {
  Vec gx, gy;
  mean_full_gradients(prob, x, y, gx, gy);
  Vec px(x.size()), py(y.size());
  kernels::lincomb(px, 1.0, x, -s, gx);
  prob.prox_x(px, s);
  kernels::lincomb(py, 1.0, y, s, gy);
  prob.prox_y(py, s);
  kernels::axpy(px, -1.0, x);
  kernels::axpy(py, -1.0, y);
  return std::sqrt(kernels::sumsq(px)) + std::sqrt(kernels::sumsq(py));
}

}  // namespace

BenchmarkSolution benchmark_saddle(const SaddleProblem& prob,
                                   long long iterations, double tol) {
  if (iterations < 1) throw ConfigError("benchmark needs iterations >= 1");
  // A residual of exactly zero only means the iteration became stationary at
  // double precision, not that the saddle point is exact, so a zero tolerance
  // is never considered met.
  if (tol <= 0.0)
    throw NotConverged("benchmark tolerance must be positive", tol);
  const auto& c = prob.constants();
  const double s = c.mu / (24.0 * c.L * c.L);

  BenchmarkSolution sol;
  sol.step = s;
  sol.x_star.assign(prob.dim_x(), 0.0);
  sol.y_star.assign(prob.dim_y(), 0.0);

  Vec gx, gy;
  long long t = 0;
  double res = std::numeric_limits<double>::infinity();
  const long long check_every = 200;
  for (; t < iterations; ++t) {
    mean_full_gradients(prob, sol.x_star, sol.y_star, gx, gy);
    kernels::axpy(sol.x_star, -s, gx);
    prob.prox_x(sol.x_star, s);
    kernels::axpy(sol.y_star, s, gy);
    prob.prox_y(sol.y_star, s);
    if ((t + 1) % check_every == 0 || t + 1 == iterations) {
      res = fixed_point_residual(prob, sol.x_star, sol.y_star, s);
      if (res <= tol) {
        ++t;
        break;
      }
    }
  }
  sol.iterations = t;
  sol.residual = fixed_point_residual(prob, sol.x_star, sol.y_star, s);
  if (sol.residual > tol)
    throw NotConverged("benchmark residual " + std::to_string(sol.residual) +
                           " above tolerance after " + std::to_string(t) +
                           " iterations",
                       sol.residual);

  // Gradient statistics at z*.
  Vec tmp;
  for (int i = 0; i < prob.nodes(); ++i) {
    for (int l = 0; l < prob.batches(); ++l) {
      prob.grad_x(i, l, sol.x_star, sol.y_star, tmp);
      sol.grad_stats.C_x += kernels::sumsq(tmp);
      prob.grad_y(i, l, sol.x_star, sol.y_star, tmp);
      sol.grad_stats.C_y += kernels::sumsq(tmp);
    }
  }
  mean_full_gradients(prob, sol.x_star, sol.y_star, gx, gy);
  sol.grad_stats.mean_grad_x_sq = kernels::sumsq(gx);
  sol.grad_stats.mean_grad_y_sq = kernels::sumsq(gy);
  return sol;
}

namespace {

std::string hexd(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%la", v);
  return buf;
}

double parse_hexd(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

void save_benchmark(const BenchmarkSolution& sol, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write benchmark file: " + path);
  f << "saddlesim-benchmark v1\n";
  f << "config_hash " << sol.config_hash << "\n";
  f << "iterations " << sol.iterations << "\n";
  f << "step " << hexd(sol.step) << "\n";
  f << "residual " << hexd(sol.residual) << "\n";
  f << "cx " << hexd(sol.grad_stats.C_x) << "\n";
  f << "cy " << hexd(sol.grad_stats.C_y) << "\n";
  f << "mean_gx_sq " << hexd(sol.grad_stats.mean_grad_x_sq) << "\n";
  f << "mean_gy_sq " << hexd(sol.grad_stats.mean_grad_y_sq) << "\n";
  f << "dims " << sol.x_star.size() << " " << sol.y_star.size() << "\n";
  f << "x";
  for (double v : sol.x_star) f << " " << hexd(v);
  f << "\ny";
  for (double v : sol.y_star) f << " " << hexd(v);
  f << "\n";
}

BenchmarkSolution load_benchmark(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open benchmark file: " + path);
  std::string header;
  std::getline(f, header);
  if (header != "saddlesim-benchmark v1")
    throw ConfigError("not a benchmark file: " + path);
  BenchmarkSolution sol;
  std::string key, tok;
  std::size_t dx = 0, dy = 0;
  while (f >> key) {
    if (key == "config_hash") f >> sol.config_hash;
    else if (key == "iterations") f >> sol.iterations;
    else if (key == "step") { f >> tok; sol.step = parse_hexd(tok); }
    else if (key == "residual") { f >> tok; sol.residual = parse_hexd(tok); }
    else if (key == "cx") { f >> tok; sol.grad_stats.C_x = parse_hexd(tok); }
    else if (key == "cy") { f >> tok; sol.grad_stats.C_y = parse_hexd(tok); }
    else if (key == "mean_gx_sq") { f >> tok; sol.grad_stats.mean_grad_x_sq = parse_hexd(tok); }
    else if (key == "mean_gy_sq") { f >> tok; sol.grad_stats.mean_grad_y_sq = parse_hexd(tok); }
    else if (key == "dims") f >> dx >> dy;
    else if (key == "x") {
      sol.x_star.resize(dx);
      for (auto& v : sol.x_star) { f >> tok; v = parse_hexd(tok); }
    } else if (key == "y") {
      sol.y_star.resize(dy);
      for (auto& v : sol.y_star) { f >> tok; v = parse_hexd(tok); }
    } else {
      throw ConfigError("unknown benchmark file key: " + key);
    }
  }
  if (sol.x_star.size() != dx || sol.y_star.size() != dy)
    throw ConfigError("truncated benchmark file: " + path);
  return sol;
}

double dist_sq_to_saddle(const std::vector<Vec>& x, const std::vector<Vec>& y,
                         const BenchmarkSolution& sol) {
  const int m = static_cast<int>(x.size());
  double acc = 0.0;
  Vec diff;
  for (int i = 0; i < m; ++i) {
    diff.resize(x[i].size());
    kernels::lincomb(diff, 1.0, x[i], -1.0, sol.x_star);
    acc += kernels::sumsq(diff);
    diff.resize(y[i].size());
    kernels::lincomb(diff, 1.0, y[i], -1.0, sol.y_star);
    acc += kernels::sumsq(diff);
  }
  return acc / m;
}

}  // namespace saddlesim
