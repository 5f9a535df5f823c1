#pragma once

#include <cstdint>
#include <vector>

#include "kpcanet/core.hpp"
#include "kpcanet/network_types.hpp"

namespace kpcanet {

/// Per-pixel integer codes assembled from the signs of the last stage's
/// maps; every code lies in [0, 2^L - 1].
struct HashedMap {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint32_t> codes;

    std::uint32_t at(int r, int c) const {
        return codes[static_cast<std::size_t>(r) * cols + c];
    }
};

/// The pooled feature: non-negative histogram counts, laid out
/// group-major, then block index, then bin.
struct FeatureVector {
    std::vector<std::uint32_t> values;
};

struct BlockRect {
    int row0 = 0;
    int col0 = 0;
    int rows = 0;
    int cols = 0;
};

/// H(x) = 1 if x > 0, else 0 (the boundary H(0) = 0 is pinned).
inline std::uint32_t heaviside(double x) { return x > 0.0 ? 1u : 0u; }

/// code(pixel) = sum_s 2^(s-1) H(map_s(pixel)); the first map in the list
/// contributes the least significant bit.
HashedMap hash_maps(const std::vector<const GrayImage *> &maps_for_group);

/// Overlapping block partition. Stride per dimension is
/// max(1, round(b * (1 - overlap))); top-left positions run 0, stride, ...;
/// a final block is clamped flush to the boundary if the tiling would leave
/// uncovered pixels (positions deduplicated). Rectangles are returned in
/// row-major order of their top-left corners.
std::vector<BlockRect> partition_blocks(int rows, int cols, int b1, int b2, double overlap);

/// counts[v] = number of pixels in the block with code v; sums to the
/// block area.
std::vector<std::uint32_t> block_histogram(const HashedMap &hashed, const BlockRect &block,
                                           int bins);

/// Full pooling: group maps by all-but-last lineage index, hash each
/// group's last-stage maps, histogram every block, concatenate in
/// (group, block, bin) order.
FeatureVector pool(const StageOutput &stage_output, const NetConfig &config);

/// Pooled feature length for the given geometry.
std::size_t feature_length(const NetConfig &config, int image_rows, int image_cols);

}  // namespace kpcanet
