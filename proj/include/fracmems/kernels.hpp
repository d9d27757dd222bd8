#pragma once

// Low-level dense kernels used by the numerics: scalar reference
// implementations plus SIMD variants selected once at startup from CPU
// capabilities. All variants are equivalence-tested against the scalar
// reference. Reductions may reassociate, so cross-backend results agree
// only to rounding, not bit-for-bit; min/max reductions are exact.

#include <cstddef>

namespace fracmems::kern {

enum class Backend { Scalar, Avx2, Neon };

// Backend currently used by the dispatched entry points.
Backend active_backend();

// Force a specific backend (tests); Scalar is always available.
// Returns false if the requested backend is not supported on this CPU.
bool force_backend(Backend b);

// Reset to the auto-detected best backend.
void reset_backend();

const char* backend_name(Backend b);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

// sum_i w[i] * x[i] * y[i]
double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n);

// max_i |x[i] - y[i]|
double sup_abs_diff(const double* x, const double* y, std::size_t n);

// min_i (a[i] - v[i])
double min_gap(const double* a, const double* v, std::size_t n);

// out[i] = lam / (a[i] - v[i])^2   (caller guarantees a > v)
void inv_sq_scale(double lam, const double* a, const double* v, double* out,
                  std::size_t n);

// y = A x, A row-major (rows x cols)
void matvec(const double* A, const double* x, double* y, std::size_t rows,
            std::size_t cols);

}  // namespace fracmems::kern
