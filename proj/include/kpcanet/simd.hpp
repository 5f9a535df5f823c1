#pragma once

#include <cstddef>

// Data-parallel reductions behind the kernel evaluations and the linear
// classifier. Every operation has a scalar reference implementation and an
// AVX2+FMA variant; the active backend is picked once at startup from CPUID.
// Both backends follow the same canonical accumulation order per column
// (two partial sums over 4-lane blocks, fixed-order horizontal reduce,
// scalar tail), so a value computed for one column is bit-identical whether
// it was produced by a single-pair call or a batched *_many call of the
// same backend.

namespace kpcanet::simd {

struct Ops {
    double (*dot)(const double *a, const double *b, std::size_t n);
    double (*sqdist)(const double *a, const double *b, std::size_t n);
    double (*sum)(const double *a, std::size_t n);
    // y += a * x
    void (*axpy)(double a, const double *x, double *y, std::size_t n);
    // out[j] = dot(q, cols + j*n); columns are contiguous length-n blocks.
    void (*dot_many)(const double *q, const double *cols, std::size_t n, std::size_t count,
                     double *out);
    void (*sqdist_many)(const double *q, const double *cols, std::size_t n, std::size_t count,
                        double *out);
    // Mixed precision for the classifier: float data, double accumulator.
    double (*dot_fd)(const double *w, const float *x, std::size_t n);
    void (*axpy_df)(double a, const float *x, double *y, std::size_t n);
    const char *name;
};

namespace scalar {
extern const Ops ops;
}
#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const Ops ops;  // only callable when has_avx2()
}
#endif

bool has_avx2();

/// The backend selected at startup (AVX2 when the CPU supports it).
const Ops &active();

const char *backend_name();

inline double dot(const double *a, const double *b, std::size_t n) { return active().dot(a, b, n); }
inline double sqdist(const double *a, const double *b, std::size_t n) {
    return active().sqdist(a, b, n);
}
inline double sum(const double *a, std::size_t n) { return active().sum(a, n); }
inline void axpy(double a, const double *x, double *y, std::size_t n) { active().axpy(a, x, y, n); }
inline void dot_many(const double *q, const double *cols, std::size_t n, std::size_t count,
                     double *out) {
    active().dot_many(q, cols, n, count, out);
}
inline void sqdist_many(const double *q, const double *cols, std::size_t n, std::size_t count,
                        double *out) {
    active().sqdist_many(q, cols, n, count, out);
}
inline double dot_fd(const double *w, const float *x, std::size_t n) {
    return active().dot_fd(w, x, n);
}
inline void axpy_df(double a, const float *x, double *y, std::size_t n) {
    active().axpy_df(a, x, y, n);
}

}  // namespace kpcanet::simd
