#include "kpcanet/patches.hpp"

namespace kpcanet {

PatchMatrix extract_dense(const GrayImage &image, int k1, int k2, bool remove_mean) {
    if (k1 < 1 || k2 < 1) throw ConfigError("patch dimensions must be positive");
    const int m = image.rows, n = image.cols;
    const int pad_top = (k1 - 1) / 2;
    const int pad_left = (k2 - 1) / 2;
    PatchMatrix out(k1 * k2, m * n);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) {
            double *dst = out.col(r * n + c);
            for (int a = 0; a < k1; ++a) {
                int sr = r + a - pad_top;
                const bool row_ok = sr >= 0 && sr < m;
                for (int b = 0; b < k2; ++b) {
                    int sc = c + b - pad_left;
                    dst[a * k2 + b] =
                        (row_ok && sc >= 0 && sc < n) ? image.at(sr, sc) : 0.0;
                }
            }
        }
    }
    if (remove_mean) {
        Eigen::RowVectorXd means = out.cols.colwise().mean();
        out.cols.rowwise() -= means;
    }
    return out;
}

PatchMatrix subsample(const PatchMatrix &patches, int budget, Rng &rng) {
    if (patches.count() == 0) throw DataError("no patches");
    if (budget < 1) throw ConfigError("patch budget must be positive");
    if (budget >= patches.count()) return patches;
    auto picked = rng.sample_indices(static_cast<std::uint64_t>(patches.count()),
                                     static_cast<std::uint64_t>(budget));
    PatchMatrix out(patches.patch_dim(), static_cast<int>(picked.size()));
    for (std::size_t j = 0; j < picked.size(); ++j)
        out.cols.col(static_cast<int>(j)) = patches.cols.col(static_cast<int>(picked[j]));
    return out;
}

}  // namespace kpcanet
