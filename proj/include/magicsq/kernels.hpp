#ifndef MAGICSQ_KERNELS_HPP
#define MAGICSQ_KERNELS_HPP

#include <cstddef>

// Small dense-vector kernels used by the scaling and permanent inner loops.
// Scalar reference implementations are always available; on x86-64 an AVX2
// variant of each kernel is selected once at startup when the CPU supports it.
// The two backends are equivalence-tested against each other.

namespace magicsq::kernels {

namespace scalar {
double sum(const double* x, std::size_t n);
double product(const double* x, std::size_t n);
void scale(double* x, std::size_t n, double f);
void add(double* y, const double* x, std::size_t n);
void sub(double* y, const double* x, std::size_t n);
void mul(double* y, const double* x, std::size_t n);
double max_abs_dev(const double* x, std::size_t n, double c);
}  // namespace scalar

namespace avx2 {
bool available();
double sum(const double* x, std::size_t n);
double product(const double* x, std::size_t n);
void scale(double* x, std::size_t n, double f);
void add(double* y, const double* x, std::size_t n);
void sub(double* y, const double* x, std::size_t n);
void mul(double* y, const double* x, std::size_t n);
double max_abs_dev(const double* x, std::size_t n, double c);
}  // namespace avx2

// Runtime-dispatched entry points.
extern double (*sum)(const double*, std::size_t);
extern double (*product)(const double*, std::size_t);
extern void (*scale)(double*, std::size_t, double);
extern void (*add)(double*, const double*, std::size_t);
extern void (*sub)(double*, const double*, std::size_t);
extern void (*mul)(double*, const double*, std::size_t);
extern double (*max_abs_dev)(const double*, std::size_t, double);

// "avx2" or "scalar".
const char* active_backend();

}  // namespace magicsq::kernels

#endif
