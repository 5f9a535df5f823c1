#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "kpcanet/simd.hpp"

// Canonical accumulation per column: two 4-lane partial sums over 8-element
// steps, one optional 4-element step into the first partial, fixed-order
// horizontal reduce, then a scalar tail. dot_many/sqdist_many interleave up
// to four columns but keep each column's sequence identical to the
// single-pair routine, so the batched entries are bit-identical to it.

namespace kpcanet::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d t = _mm_add_pd(lo, hi);                      // {v0+v2, v1+v3}
    return _mm_cvtsd_f64(t) + _mm_cvtsd_f64(_mm_unpackhi_pd(t, t));
}

double dot_impl(const double *a, const double *b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sqdist_impl(const double *a, const double *b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    if (i + 4 <= n) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sum_impl(const double *a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
    }
    if (i + 4 <= n) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i];
    return s;
}

void axpy_impl(double a, const double *x, double *y, std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

// Four columns per block: reuses each query load across the block and keeps
// four independent FMA chains in flight.
void dot_many_impl(const double *q, const double *cols, std::size_t n, std::size_t count,
                   double *out) {
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        const double *c0 = cols + (j + 0) * n;
        const double *c1 = cols + (j + 1) * n;
        const double *c2 = cols + (j + 2) * n;
        const double *c3 = cols + (j + 3) * n;
        __m256d a00 = _mm256_setzero_pd(), a01 = _mm256_setzero_pd();
        __m256d a10 = _mm256_setzero_pd(), a11 = _mm256_setzero_pd();
        __m256d a20 = _mm256_setzero_pd(), a21 = _mm256_setzero_pd();
        __m256d a30 = _mm256_setzero_pd(), a31 = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 8 <= n; i += 8) {
            __m256d q0 = _mm256_loadu_pd(q + i);
            __m256d q1 = _mm256_loadu_pd(q + i + 4);
            a00 = _mm256_fmadd_pd(q0, _mm256_loadu_pd(c0 + i), a00);
            a01 = _mm256_fmadd_pd(q1, _mm256_loadu_pd(c0 + i + 4), a01);
            a10 = _mm256_fmadd_pd(q0, _mm256_loadu_pd(c1 + i), a10);
            a11 = _mm256_fmadd_pd(q1, _mm256_loadu_pd(c1 + i + 4), a11);
            a20 = _mm256_fmadd_pd(q0, _mm256_loadu_pd(c2 + i), a20);
            a21 = _mm256_fmadd_pd(q1, _mm256_loadu_pd(c2 + i + 4), a21);
            a30 = _mm256_fmadd_pd(q0, _mm256_loadu_pd(c3 + i), a30);
            a31 = _mm256_fmadd_pd(q1, _mm256_loadu_pd(c3 + i + 4), a31);
        }
        if (i + 4 <= n) {
            __m256d q0 = _mm256_loadu_pd(q + i);
            a00 = _mm256_fmadd_pd(q0, _mm256_loadu_pd(c0 + i), a00);
            a10 = _mm256_fmadd_pd(q0, _mm256_loadu_pd(c1 + i), a10);
            a20 = _mm256_fmadd_pd(q0, _mm256_loadu_pd(c2 + i), a20);
            a30 = _mm256_fmadd_pd(q0, _mm256_loadu_pd(c3 + i), a30);
            i += 4;
        }
        double s0 = hsum(_mm256_add_pd(a00, a01));
        double s1 = hsum(_mm256_add_pd(a10, a11));
        double s2 = hsum(_mm256_add_pd(a20, a21));
        double s3 = hsum(_mm256_add_pd(a30, a31));
        for (; i < n; ++i) {
            double qv = q[i];
            s0 += qv * c0[i];
            s1 += qv * c1[i];
            s2 += qv * c2[i];
            s3 += qv * c3[i];
        }
        out[j + 0] = s0;
        out[j + 1] = s1;
        out[j + 2] = s2;
        out[j + 3] = s3;
    }
    for (; j < count; ++j) out[j] = dot_impl(q, cols + j * n, n);
}

void sqdist_many_impl(const double *q, const double *cols, std::size_t n, std::size_t count,
                      double *out) {
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        const double *c0 = cols + (j + 0) * n;
        const double *c1 = cols + (j + 1) * n;
        const double *c2 = cols + (j + 2) * n;
        const double *c3 = cols + (j + 3) * n;
        __m256d a00 = _mm256_setzero_pd(), a01 = _mm256_setzero_pd();
        __m256d a10 = _mm256_setzero_pd(), a11 = _mm256_setzero_pd();
        __m256d a20 = _mm256_setzero_pd(), a21 = _mm256_setzero_pd();
        __m256d a30 = _mm256_setzero_pd(), a31 = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 8 <= n; i += 8) {
            __m256d q0 = _mm256_loadu_pd(q + i);
            __m256d q1 = _mm256_loadu_pd(q + i + 4);
            __m256d d;
            d = _mm256_sub_pd(q0, _mm256_loadu_pd(c0 + i));
            a00 = _mm256_fmadd_pd(d, d, a00);
            d = _mm256_sub_pd(q1, _mm256_loadu_pd(c0 + i + 4));
            a01 = _mm256_fmadd_pd(d, d, a01);
            d = _mm256_sub_pd(q0, _mm256_loadu_pd(c1 + i));
            a10 = _mm256_fmadd_pd(d, d, a10);
            d = _mm256_sub_pd(q1, _mm256_loadu_pd(c1 + i + 4));
            a11 = _mm256_fmadd_pd(d, d, a11);
            d = _mm256_sub_pd(q0, _mm256_loadu_pd(c2 + i));
            a20 = _mm256_fmadd_pd(d, d, a20);
            d = _mm256_sub_pd(q1, _mm256_loadu_pd(c2 + i + 4));
            a21 = _mm256_fmadd_pd(d, d, a21);
            d = _mm256_sub_pd(q0, _mm256_loadu_pd(c3 + i));
            a30 = _mm256_fmadd_pd(d, d, a30);
            d = _mm256_sub_pd(q1, _mm256_loadu_pd(c3 + i + 4));
            a31 = _mm256_fmadd_pd(d, d, a31);
        }
        if (i + 4 <= n) {
            __m256d q0 = _mm256_loadu_pd(q + i);
            __m256d d;
            d = _mm256_sub_pd(q0, _mm256_loadu_pd(c0 + i));
            a00 = _mm256_fmadd_pd(d, d, a00);
            d = _mm256_sub_pd(q0, _mm256_loadu_pd(c1 + i));
            a10 = _mm256_fmadd_pd(d, d, a10);
            d = _mm256_sub_pd(q0, _mm256_loadu_pd(c2 + i));
            a20 = _mm256_fmadd_pd(d, d, a20);
            d = _mm256_sub_pd(q0, _mm256_loadu_pd(c3 + i));
            a30 = _mm256_fmadd_pd(d, d, a30);
            i += 4;
        }
        double s0 = hsum(_mm256_add_pd(a00, a01));
        double s1 = hsum(_mm256_add_pd(a10, a11));
        double s2 = hsum(_mm256_add_pd(a20, a21));
        double s3 = hsum(_mm256_add_pd(a30, a31));
        for (; i < n; ++i) {
            double qv = q[i], d;
            d = qv - c0[i];
            s0 += d * d;
            d = qv - c1[i];
            s1 += d * d;
            d = qv - c2[i];
            s2 += d * d;
            d = qv - c3[i];
            s3 += d * d;
        }
        out[j + 0] = s0;
        out[j + 1] = s1;
        out[j + 2] = s2;
        out[j + 3] = s3;
    }
    for (; j < count; ++j) out[j] = sqdist_impl(q, cols + j * n, n);
}

double dot_fd_impl(const double *w, const float *x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d x0 = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        __m256d x1 = _mm256_cvtps_pd(_mm_loadu_ps(x + i + 4));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), x0, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), x1, acc1);
    }
    if (i + 4 <= n) {
        __m256d x0 = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), x0, acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += w[i] * static_cast<double>(x[i]);
    return s;
}

void axpy_df_impl(double a, const float *x, double *y, std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, xv, _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += a * static_cast<double>(x[i]);
}

}  // namespace

const Ops ops = {
    dot_impl,    sqdist_impl,      sum_impl,    axpy_impl,
    dot_many_impl, sqdist_many_impl, dot_fd_impl, axpy_df_impl,
    "avx2",
};

}  // namespace kpcanet::simd::avx2

#endif  // x86_64
