#pragma once

#include <Eigen/Dense>

#include "kpcanet/core.hpp"

namespace kpcanet {

/// Vectorized patches, one per column (column-major, patch_dim x count).
struct PatchMatrix {
    Eigen::MatrixXd cols;

    PatchMatrix() = default;
    PatchMatrix(int patch_dim, int count) : cols(patch_dim, count) {}

    int patch_dim() const { return static_cast<int>(cols.rows()); }
    int count() const { return static_cast<int>(cols.cols()); }
    const double *col(int j) const { return cols.col(j).data(); }
    double *col(int j) { return cols.col(j).data(); }
};

/// Dense patch extraction with zero padding: one k1 x k2 window per pixel,
/// in row-major pixel order, vectorized row-major within the patch.
/// The window for pixel (r,c) spans rows [r - (k1-1)/2, r + k1/2] and
/// equivalently for columns (integer division), which pins the centering
/// of even-sized patches. Out-of-image elements are 0. If remove_mean,
/// each column has its scalar mean subtracted.
PatchMatrix extract_dense(const GrayImage &image, int k1, int k2, bool remove_mean);

/// min(budget, count) columns drawn uniformly without replacement, returned
/// in ascending original-column order. Deterministic given the rng state.
PatchMatrix subsample(const PatchMatrix &patches, int budget, Rng &rng);

}  // namespace kpcanet
