#include "kpcanet/simd.hpp"

namespace kpcanet::simd::scalar {

namespace {

double dot_impl(const double *a, const double *b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sqdist_impl(const double *a, const double *b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sum_impl(const double *a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
}

void axpy_impl(double a, const double *x, double *y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void dot_many_impl(const double *q, const double *cols, std::size_t n, std::size_t count,
                   double *out) {
    for (std::size_t j = 0; j < count; ++j) out[j] = dot_impl(q, cols + j * n, n);
}

void sqdist_many_impl(const double *q, const double *cols, std::size_t n, std::size_t count,
                      double *out) {
    for (std::size_t j = 0; j < count; ++j) out[j] = sqdist_impl(q, cols + j * n, n);
}

double dot_fd_impl(const double *w, const float *x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * static_cast<double>(x[i]);
    return s;
}

void axpy_df_impl(double a, const float *x, double *y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * static_cast<double>(x[i]);
}

}  // namespace

const Ops ops = {
    dot_impl,    sqdist_impl,      sum_impl,    axpy_impl,
    dot_many_impl, sqdist_many_impl, dot_fd_impl, axpy_df_impl,
    "scalar",
};

}  // namespace kpcanet::simd::scalar
