#include "magicsq/kernels.hpp"

#include <cmath>

namespace magicsq::kernels {

namespace scalar {

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double product(const double* x, std::size_t n) {
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) p *= x[i];
  return p;
}

void scale(double* x, std::size_t n, double f) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= f;
}

void add(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void sub(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] -= x[i];
}

void mul(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= x[i];
}

double max_abs_dev(const double* x, std::size_t n, double c) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - c));
  return m;
}

}  // namespace scalar

namespace {

struct Dispatch {
  Dispatch() {
    if (avx2::available()) {
      kernels::sum = &avx2::sum;
      kernels::product = &avx2::product;
      kernels::scale = &avx2::scale;
      kernels::add = &avx2::add;
      kernels::sub = &avx2::sub;
      kernels::mul = &avx2::mul;
      kernels::max_abs_dev = &avx2::max_abs_dev;
      backend = "avx2";
    }
  }
  const char* backend = "scalar";
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

double (*sum)(const double*, std::size_t) = &scalar::sum;
double (*product)(const double*, std::size_t) = &scalar::product;
void (*scale)(double*, std::size_t, double) = &scalar::scale;
void (*add)(double*, const double*, std::size_t) = &scalar::add;
void (*sub)(double*, const double*, std::size_t) = &scalar::sub;
void (*mul)(double*, const double*, std::size_t) = &scalar::mul;
double (*max_abs_dev)(const double*, std::size_t, double) = &scalar::max_abs_dev;

const char* active_backend() { return dispatch().backend; }

namespace {
// Force dispatch before main so the function pointers are settled once.
const char* const init_backend = active_backend();
}  // namespace

}  // namespace magicsq::kernels
