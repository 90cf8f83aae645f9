#include "saddlesim/kernels.hpp"

namespace saddlesim::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sumsq_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void scale_scalar(double* out, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void lincomb_scalar(double* out, double a, const double* x, double b,
                    const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void lincomb3_scalar(double* out, double a, const double* x, double b,
                     const double* y, double c, const double* z,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i] + c * z[i];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar",        dot_scalar,     sumsq_scalar,
                       scale_scalar,    axpy_scalar,    lincomb_scalar,
                       lincomb3_scalar};
  return ops;
}

}  // namespace saddlesim::kernels
