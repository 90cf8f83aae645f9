#include "saddlesim/hyperparams.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saddlesim/errors.hpp"

namespace saddlesim {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double gamma_for(double b, double delta, double lambda_max) {
  const double cap = 1.0 / (4.0 * (1.0 + delta) * lambda_max);
  if (delta == 0.0) return cap;
  return std::min(b / (4.0 * std::sqrt(delta) * (1.0 + delta) * lambda_max), cap);
}

double big_m_for(double alpha, double gamma, double delta, double lambda_max) {
  if (delta == 0.0) return 1.0;
  return 1.0 - std::sqrt(delta) * alpha / (1.0 - gamma / 2.0 * lambda_max);
}

void check_interval(double v, double lo, double hi, const char* name,
                    bool lo_open = true, bool hi_open = true) {
  const bool bad_lo = lo_open ? v <= lo : v < lo;
  const bool bad_hi = hi_open ? v >= hi : v > hi;
  if (bad_lo || bad_hi || !std::isfinite(v))
    throw InfeasibleConstants(std::string(name) + " = " + std::to_string(v) +
                              " outside its admissible interval");
}

void check_block(double b_x, double b_y, double alpha_x, double alpha_y,
                 double gamma_x, double gamma_y, double M_x, double M_y,
                 double rho, double delta, const NetworkTopology& topo) {
  check_interval(b_x, 0.0, 1.0, "b_x");
  check_interval(b_y, 0.0, 1.0, "b_y");
  check_interval(alpha_x, 0.0, 1.0 / (1.0 + delta), "alpha_x", true, false);
  check_interval(alpha_y, 0.0, 1.0 / (1.0 + delta), "alpha_y", true, false);
  if (topo.m > 1) {
    check_interval(gamma_x / 2.0 * topo.lambda_second_min_IW, 0.0, 1.0, "gamma_x*lambda_{m-1}/2");
    check_interval(gamma_y / 2.0 * topo.lambda_second_min_IW, 0.0, 1.0, "gamma_y*lambda_{m-1}/2");
  }
  check_interval(M_x, 0.0, 1.0, "M_x", true, false);
  check_interval(M_y, 0.0, 1.0, "M_y", true, false);
  check_interval((1.0 - b_x) / M_x, 0.0, 1.0, "(1-b_x)/M_x");
  check_interval((1.0 - b_y) / M_y, 0.0, 1.0, "(1-b_y)/M_y");
  check_interval(rho, 0.0, 1.0, "rho");
}

}  // namespace

HyperParams derive_params_gsgo(const ProblemConstants& c, int n, double p_min,
                               const NetworkTopology& topo, double delta) {
  if (c.L <= 0.0 || c.mu <= 0.0 || c.L < c.mu)
    throw InfeasibleConstants("need L >= mu > 0");
  if (n < 1 || p_min <= 0.0 || p_min > 1.0)
    throw InfeasibleConstants("need n >= 1 and p_min in (0,1]");
  if (delta < 0.0) throw InfeasibleConstants("need delta >= 0");

  HyperParams hp;
  hp.delta = delta;
  hp.p_min = p_min;
  hp.n = n;
  hp.m = topo.m;
  hp.L = c.L;
  hp.mu = c.mu;
  hp.kappa_f = c.kappa_f;
  hp.kappa_g = topo.kappa_g;
  hp.lambda_max_IW = topo.lambda_max_IW;
  hp.lambda_second_min_IW = topo.lambda_second_min_IW;

  const double np = n * p_min;
  hp.s0 = np / (4.0 * kSqrt2 * c.L * c.kappa_f);
  hp.b_x0 = c.mu_x * hp.s0 - 4.0 * hp.s0 * hp.s0 * c.L_yx * c.L_yx / np;
  hp.b_y0 = c.mu_y * hp.s0 - 4.0 * hp.s0 * hp.s0 * c.L_xy * c.L_xy / np;
  hp.alpha_x0 = hp.b_x0 / (1.0 + delta);
  hp.alpha_y0 = hp.b_y0 / (1.0 + delta);
  hp.gamma_x0 = gamma_for(hp.b_x0, delta, topo.lambda_max_IW);
  hp.gamma_y0 = gamma_for(hp.b_y0, delta, topo.lambda_max_IW);
  hp.M_x0 = big_m_for(hp.alpha_x0, hp.gamma_x0, delta, topo.lambda_max_IW);
  hp.M_y0 = big_m_for(hp.alpha_y0, hp.gamma_y0, delta, topo.lambda_max_IW);
  hp.rho0 = std::max({1.0 - 3.0 * hp.b_x0 / 7.0, 1.0 - 3.0 * hp.b_y0 / 7.0,
                      1.0 - hp.gamma_x0 / 2.0 * topo.lambda_second_min_IW,
                      1.0 - hp.gamma_y0 / 2.0 * topo.lambda_second_min_IW,
                      1.0 - hp.alpha_x0, 1.0 - hp.alpha_y0});
  check_block(hp.b_x0, hp.b_y0, hp.alpha_x0, hp.alpha_y0, hp.gamma_x0,
              hp.gamma_y0, hp.M_x0, hp.M_y0, hp.rho0, delta, topo);
  return hp;
}

void derive_params_svrg(HyperParams& hp, const ProblemConstants& c,
                        double p_ref) {
  if (p_ref <= 0.0 || p_ref > 1.0)
    throw InfeasibleConstants("need p_ref in (0,1]");
  hp.p_ref = p_ref;
  const double np = hp.n * hp.p_min;
  hp.s = c.mu * np / (24.0 * c.L * c.L);
  hp.c_tilde_x = 8.0 * hp.s * hp.s * (c.L * c.L + c.L_yx * c.L_yx) / (np * p_ref);
  hp.c_tilde_y = 8.0 * hp.s * hp.s * (c.L * c.L + c.L_xy * c.L_xy) / (np * p_ref);
  hp.b_x = hp.s * c.mu_x - 4.0 * hp.s * hp.s * c.L_yx * c.L_yx / np -
           hp.c_tilde_x * p_ref;
  hp.b_y = hp.s * c.mu_y - 4.0 * hp.s * hp.s * c.L_xy * c.L_xy / np -
           hp.c_tilde_y * p_ref;
  hp.alpha_x = hp.b_x / (1.0 + hp.delta);
  hp.alpha_y = hp.b_y / (1.0 + hp.delta);
  hp.gamma_x = gamma_for(hp.b_x, hp.delta, hp.lambda_max_IW);
  hp.gamma_y = gamma_for(hp.b_y, hp.delta, hp.lambda_max_IW);
  hp.M_x = big_m_for(hp.alpha_x, hp.gamma_x, hp.delta, hp.lambda_max_IW);
  hp.M_y = big_m_for(hp.alpha_y, hp.gamma_y, hp.delta, hp.lambda_max_IW);
  hp.rho = std::max({1.0 - 3.0 * hp.b_x / 7.0, 1.0 - 3.0 * hp.b_y / 7.0,
                     1.0 - hp.gamma_x / 2.0 * hp.lambda_second_min_IW,
                     1.0 - hp.gamma_y / 2.0 * hp.lambda_second_min_IW,
                     1.0 - hp.alpha_x, 1.0 - hp.alpha_y, 1.0 - p_ref / 2.0});
}

HyperParams derive_hyperparams(const ProblemConstants& c, int n, double p_min,
                               const NetworkTopology& topo, double delta,
                               double p_ref) {
  HyperParams hp = derive_params_gsgo(c, n, p_min, topo, delta);
  derive_params_svrg(hp, c, p_ref);
  check_block(hp.b_x, hp.b_y, hp.alpha_x, hp.alpha_y, hp.gamma_x, hp.gamma_y,
              hp.M_x, hp.M_y, hp.rho, delta, topo);
  if (hp.rho0 > hp.rho)
    throw InfeasibleConstants("rho0 > rho; phase ordering violated");
  return hp;
}

}  // namespace saddlesim
