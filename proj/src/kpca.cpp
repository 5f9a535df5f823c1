#include "kpcanet/kpca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kpcanet {

Eigen::MatrixXd center_gram(const Eigen::MatrixXd &K) {
    if (K.rows() != K.cols()) throw DataError("center_gram: matrix not square");
    const auto m = K.rows();
    Eigen::VectorXd col_means = K.colwise().mean().transpose();
    double grand = col_means.mean();
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index q = 0; q < m; ++q)
        for (Eigen::Index p = 0; p < m; ++p)
            out(p, q) = K(p, q) - col_means(p) - col_means(q) + grand;
    return out;
}

EigenPairs eigensolve_descending(const Eigen::MatrixXd &S, int L) {
    if (S.rows() != S.cols()) throw DataError("eigensolve: matrix not square");
    const int m = static_cast<int>(S.rows());
    if (L > m) throw ConfigError("eigensolve: L exceeds matrix size");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigensolve: decomposition failed");
    const Eigen::VectorXd &vals = solver.eigenvalues();  // ascending
    const Eigen::MatrixXd &vecs = solver.eigenvectors();

    // Descending order with stable ties (original solver order preserved).
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals(a) > vals(b); });

    double max_abs = 0.0;
    for (int i = 0; i < m; ++i) max_abs = std::max(max_abs, std::abs(vals(i)));
    const double cutoff = 1e-10 * max_abs;

    int usable = 0;
    while (usable < m && vals(order[usable]) > cutoff) ++usable;
    if (usable < L)
        throw NumericError("insufficient positive spectrum: " + std::to_string(usable) +
                           " positive eigenvalue(s) available, " + std::to_string(L) +
                           " requested");

    EigenPairs out;
    out.values.resize(L);
    out.vectors.resize(L, m);
    for (int l = 0; l < L; ++l) {
        out.values(l) = vals(order[l]);
        Eigen::VectorXd v = vecs.col(order[l]);
        // Sign convention: largest-magnitude entry positive; first wins ties.
        int arg = 0;
        double best = std::abs(v(0));
        for (int i = 1; i < m; ++i) {
            if (std::abs(v(i)) > best) {
                best = std::abs(v(i));
                arg = i;
            }
        }
        if (v(arg) < 0.0) v = -v;
        out.vectors.row(l) = v.transpose();
    }
    return out;
}

KpcaBasis learn_filters(const PatchMatrix &patches, const KernelSpec &kernel, int L) {
    const int m = patches.count();
    if (m < L) throw ConfigError("learn_filters: fewer patches than components");
    if (!patches.cols.allFinite()) throw DataError("learn_filters: non-finite patch values");

    Eigen::MatrixXd K = gram(kernel, patches);
    KpcaBasis basis;
    basis.kernel = kernel;
    basis.basis_patches = patches;
    basis.basis_col_means = K.colwise().mean().transpose();
    basis.basis_total_mean = basis.basis_col_means.mean();

    Eigen::MatrixXd centered = center_gram(K);
    EigenPairs pairs = eigensolve_descending(centered, L);
    basis.eigenvalues = pairs.values;
    basis.alphas = pairs.vectors;
    for (int l = 0; l < L; ++l)
        basis.alphas.row(l) /= std::sqrt(pairs.values(l));
    basis.num_components = L;
    return basis;
}

Eigen::MatrixXd project(const KpcaBasis &basis, const PatchMatrix &queries) {
    if (queries.patch_dim() != basis.basis_patches.patch_dim())
        throw DataError("project: patch dimension mismatch");
    Eigen::MatrixXd Kx = cross_gram(basis.kernel, basis.basis_patches, queries);
    // Test-point centering, in place: subtract the per-query mean over the
    // basis, the stored basis column means, and add back the grand mean.
    Eigen::RowVectorXd query_means = Kx.colwise().mean();
    Kx.rowwise() -= query_means;
    Kx.colwise() -= (basis.basis_col_means.array() - basis.basis_total_mean).matrix();
    return basis.alphas * Kx;
}

PatchMatrix reconstruct_linear_filters(const KpcaBasis &basis) {
    if (basis.kernel.kind != KernelKind::Linear)
        throw NumericError("no exact input-space filter exists for kernel " +
                           std::string(kernel_kind_name(basis.kernel.kind)));
    const auto &X = basis.basis_patches.cols;
    Eigen::VectorXd mean = X.rowwise().mean();
    PatchMatrix filters(basis.basis_patches.patch_dim(), basis.num_components);
    for (int l = 0; l < basis.num_components; ++l)
        filters.cols.col(l) = (X.colwise() - mean) * basis.alphas.row(l).transpose();
    return filters;
}

}  // namespace kpcanet
