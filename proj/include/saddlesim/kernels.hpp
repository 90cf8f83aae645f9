#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace saddlesim::kernels {

// Dense double-precision kernels behind every inner loop. Scalar reference
// implementations are always present; an AVX2 variant is selected at runtime
// when the CPU supports it. The element-wise kernels (scale, axpy, lincomb,
// lincomb3) produce bit-identical results in both variants because neither
// uses FMA contraction; the reductions (dot, sumsq) reorder additions and
// agree only up to rounding.
struct Ops {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sumsq)(const double* x, std::size_t n);
  void (*scale)(double* out, double a, const double* x, std::size_t n);
  // y += a*x
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // out = a*x + b*y
  void (*lincomb)(double* out, double a, const double* x, double b,
                  const double* y, std::size_t n);
  // out = a*x + b*y + c*z
  void (*lincomb3)(double* out, double a, const double* x, double b,
                   const double* y, double c, const double* z, std::size_t n);
};

const Ops& scalar_ops();
// Null when the CPU lacks AVX2.
const Ops* avx2_ops();

// The active implementation; defaults to the best supported variant.
const Ops& active();

// "auto" or "scalar". Used by tests and the CLI `kernels` config key.
void select(const std::string& which);

// Vector convenience wrappers over the active kernels.
using Vec = std::vector<double>;

inline double dot(const Vec& x, const Vec& y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sumsq(const Vec& x) { return active().sumsq(x.data(), x.size()); }
inline void axpy(Vec& y, double a, const Vec& x) {
  active().axpy(y.data(), a, x.data(), x.size());
}
inline void lincomb(Vec& out, double a, const Vec& x, double b, const Vec& y) {
  active().lincomb(out.data(), a, x.data(), b, y.data(), out.size());
}
inline void lincomb3(Vec& out, double a, const Vec& x, double b, const Vec& y,
                     double c, const Vec& z) {
  active().lincomb3(out.data(), a, x.data(), b, y.data(), c, z.data(),
                    out.size());
}

}  // namespace saddlesim::kernels
