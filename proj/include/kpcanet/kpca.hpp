#pragma once

#include <Eigen/Dense>

#include "kpcanet/core.hpp"
#include "kpcanet/kernels.hpp"
#include "kpcanet/patches.hpp"

namespace kpcanet {

/// A learned kernel-PCA filter bank: the retained basis patches, the
/// eigenvector coefficients alpha (row l scaled so that
/// lambda_l * (alpha_l . alpha_l) = 1), and the Gram centering statistics
/// needed for out-of-sample projection.
struct KpcaBasis {
    KernelSpec kernel;
    PatchMatrix basis_patches;          // patch_dim x M
    Eigen::MatrixXd alphas;             // L x M
    Eigen::VectorXd eigenvalues;        // L, strictly descending, > 0
    Eigen::VectorXd basis_col_means;    // M, column means of the uncentered Gram
    double basis_total_mean = 0.0;      // grand mean of the uncentered Gram
    int num_components = 0;             // L
};

/// Double centering K' = K - 1K - K1 + 1K1 with (1)_{ij} = 1/M, computed
/// from row/column means so the output is exactly symmetric. Every row and
/// column of the result sums to ~0 (tolerance 1e-9 * M * max|K|).
Eigen::MatrixXd center_gram(const Eigen::MatrixXd &K);

struct EigenPairs {
    Eigen::VectorXd values;   // L, descending
    Eigen::MatrixXd vectors;  // L x M, row l is the l-th eigenvector
};

/// Top-L eigenpairs of a symmetric matrix, descending, ties broken by the
/// solver's original order. Each vector's sign is fixed so its
/// largest-magnitude entry is positive (first such entry on ties).
/// Eigenvalues <= 1e-10 * max|lambda| are treated as zero and never
/// returned; fewer than L usable ones raises NumericError
/// ("insufficient positive spectrum").
EigenPairs eigensolve_descending(const Eigen::MatrixXd &S, int L);

/// Learns an L-component basis: Gram, centering stats, eigensolve,
/// alpha_l = v_l / sqrt(lambda_l).
KpcaBasis learn_filters(const PatchMatrix &patches, const KernelSpec &kernel, int L);

/// Out-of-sample projection. Entry (l,q) = sum_p alpha_{l,p} ktilde(x_q, x_p)
/// where ktilde is the test-point-centered kernel value
///   ktilde(x, x_p) = k(x,x_p) - mean_r k(x,x_r) - basis_col_means[p]
///                    + basis_total_mean.
Eigen::MatrixXd project(const KpcaBasis &basis, const PatchMatrix &queries);

/// Linear kernel only: the explicit input-space filters
/// w_l = sum_p alpha_{l,p} (x_p - xbar). Projecting centered queries with
/// these equals project(). Any other kernel raises NumericError
/// ("no exact input-space filter exists").
PatchMatrix reconstruct_linear_filters(const KpcaBasis &basis);

}  // namespace kpcanet
