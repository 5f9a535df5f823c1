#include "kpcanet/kernels.hpp"

#include <cmath>
#include <numbers>

#include "kpcanet/simd.hpp"

namespace kpcanet {

namespace {

// Dot-based kinds consume x.y; the rest consume ||x-y||^2. Keeping the
// transform a single scalar function shared by eval/gram/cross_gram makes
// every assembled entry bit-identical to a direct eval() of the same pair.
bool uses_dot(KernelKind kind) {
    switch (kind) {
        case KernelKind::Linear:
        case KernelKind::Polynomial:
        case KernelKind::Sigmoid:
            return true;
        default:
            return false;
    }
}

// Integer power by repeated multiplication; fixed evaluation order keeps
// results reproducible across libm versions.
double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

double transform_dot(const KernelSpec &s, double d) {
    switch (s.kind) {
        case KernelKind::Linear:
            return d + s.c;
        case KernelKind::Polynomial:
            return ipow(d + 1.0, s.degree);
        case KernelKind::Sigmoid:
            return std::tanh(s.alpha * d + s.c);
        default:
            throw std::logic_error("transform_dot: distance kernel");
    }
}

double transform_sqdist(const KernelSpec &s, double sq) {
    switch (s.kind) {
        case KernelKind::Gaussian:
            return std::exp(-sq / (2.0 * s.sigma * s.sigma));
        case KernelKind::Exponential:
            return std::exp(-std::sqrt(sq) / (2.0 * s.sigma * s.sigma));
        case KernelKind::Laplacian:
            return std::exp(-std::sqrt(sq) / s.sigma);
        case KernelKind::RationalQuadratic:
            return std::exp(1.0 - sq / (sq + s.c));
        case KernelKind::InverseMultiquadric:
            return 1.0 / std::sqrt(sq + s.c * s.c);
        case KernelKind::Circular: {
            double u = std::sqrt(sq) / s.sigma;
            if (u >= 1.0) return 0.0;
            return (2.0 / std::numbers::pi) * (std::acos(u) - u * std::sqrt(1.0 - u * u));
        }
        case KernelKind::Spherical: {
            double u = std::sqrt(sq) / s.sigma;
            if (u >= 1.0) return 0.0;
            return 1.0 - 1.5 * u + 0.5 * u * u * u;
        }
        default:
            throw std::logic_error("transform_sqdist: dot kernel");
    }
}

inline double transform(const KernelSpec &s, double stat) {
    return uses_dot(s.kind) ? transform_dot(s, stat) : transform_sqdist(s, stat);
}

}  // namespace

double eval(const KernelSpec &spec, const double *x, const double *y, int n) {
    double stat = uses_dot(spec.kind) ? simd::dot(x, y, static_cast<std::size_t>(n))
                                      : simd::sqdist(x, y, static_cast<std::size_t>(n));
    return transform(spec, stat);
}

double eval(const KernelSpec &spec, const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size()) throw DataError("kernel eval: vector length mismatch");
    return eval(spec, x.data(), y.data(), static_cast<int>(x.size()));
}

Eigen::MatrixXd gram(const KernelSpec &spec, const PatchMatrix &points) {
    const int m = points.count();
    if (m < 1) throw DataError("gram: no points");
    const std::size_t n = static_cast<std::size_t>(points.patch_dim());
    const bool dot_kind = uses_dot(spec.kind);
    Eigen::MatrixXd K(m, m);
    std::vector<double> stats(static_cast<std::size_t>(m));
    for (int q = 0; q < m; ++q) {
        // Entries p <= q in one batched run over the column prefix.
        if (dot_kind)
            simd::dot_many(points.col(q), points.col(0), n, static_cast<std::size_t>(q) + 1,
                           stats.data());
        else
            simd::sqdist_many(points.col(q), points.col(0), n, static_cast<std::size_t>(q) + 1,
                              stats.data());
        for (int p = 0; p <= q; ++p) {
            double v = transform(spec, stats[static_cast<std::size_t>(p)]);
            K(p, q) = v;
            K(q, p) = v;
        }
    }
    return K;
}

Eigen::MatrixXd cross_gram(const KernelSpec &spec, const PatchMatrix &basis,
                           const PatchMatrix &queries) {
    if (basis.patch_dim() != queries.patch_dim())
        throw DataError("cross_gram: patch dimension mismatch");
    const int m = basis.count(), qn = queries.count();
    const std::size_t n = static_cast<std::size_t>(basis.patch_dim());
    const bool dot_kind = uses_dot(spec.kind);
    Eigen::MatrixXd K(m, qn);
    for (int q = 0; q < qn; ++q) {
        double *out = K.col(q).data();
        if (dot_kind)
            simd::dot_many(queries.col(q), basis.col(0), n, static_cast<std::size_t>(m), out);
        else
            simd::sqdist_many(queries.col(q), basis.col(0), n, static_cast<std::size_t>(m), out);
        for (int p = 0; p < m; ++p) out[p] = transform(spec, out[p]);
    }
    return K;
}

}  // namespace kpcanet
