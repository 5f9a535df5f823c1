#include "kpcanet/pooling.hpp"

#include <algorithm>
#include <cmath>

namespace kpcanet {

HashedMap hash_maps(const std::vector<const GrayImage *> &maps_for_group) {
    if (maps_for_group.empty()) throw DataError("hash_maps: no maps");
    if (maps_for_group.size() > 16)
        throw ConfigError("hash_maps: more than 16 maps cannot be hashed");
    const GrayImage &first = *maps_for_group.front();
    for (const GrayImage *m : maps_for_group)
        if (m->rows != first.rows || m->cols != first.cols)
            throw DataError("hash_maps: map shape mismatch");

    HashedMap out;
    out.rows = first.rows;
    out.cols = first.cols;
    out.codes.assign(first.size(), 0u);
    for (std::size_t s = 0; s < maps_for_group.size(); ++s) {
        const auto &px = maps_for_group[s]->pixels;
        const std::uint32_t bit = 1u << s;
        for (std::size_t i = 0; i < px.size(); ++i)
            if (px[i] > 0.0) out.codes[i] |= bit;
    }
    return out;
}

namespace {
std::vector<int> block_starts(int extent, int b, double overlap) {
    int stride = std::max(1, static_cast<int>(std::llround(b * (1.0 - overlap))));
    std::vector<int> starts;
    for (int p = 0; p + b <= extent; p += stride) starts.push_back(p);
    if (starts.empty() || starts.back() + b < extent) {
        int clamped = extent - b;
        if (starts.empty() || clamped != starts.back()) starts.push_back(clamped);
    }
    return starts;
}
}  // namespace

std::vector<BlockRect> partition_blocks(int rows, int cols, int b1, int b2, double overlap) {
    if (b1 > rows || b2 > cols) throw ConfigError("block larger than image");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("overlap must be in [0,1)");
    auto rstarts = block_starts(rows, b1, overlap);
    auto cstarts = block_starts(cols, b2, overlap);
    std::vector<BlockRect> blocks;
    blocks.reserve(rstarts.size() * cstarts.size());
    for (int r : rstarts)
        for (int c : cstarts) blocks.push_back({r, c, b1, b2});
    return blocks;
}

std::vector<std::uint32_t> block_histogram(const HashedMap &hashed, const BlockRect &block,
                                           int bins) {
    if (block.row0 < 0 || block.col0 < 0 || block.row0 + block.rows > hashed.rows ||
        block.col0 + block.cols > hashed.cols)
        throw DataError("block_histogram: block out of bounds");
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(bins), 0u);
    for (int r = block.row0; r < block.row0 + block.rows; ++r)
        for (int c = block.col0; c < block.col0 + block.cols; ++c)
            ++counts[hashed.at(r, c)];
    return counts;
}

FeatureVector pool(const StageOutput &stage_output, const NetConfig &config) {
    const int last_filters = config.last_stage_filters();
    const std::size_t total_maps = stage_output.maps.size();
    if (total_maps == 0 || total_maps % static_cast<std::size_t>(last_filters) != 0)
        throw DataError("pool: map count is not a multiple of the last stage's filter count");
    const std::size_t groups = total_maps / static_cast<std::size_t>(last_filters);
    if (stage_output.lineage.size() != total_maps)
        throw DataError("pool: lineage grouping incomplete");
    // Maps are emitted in lexicographic lineage order, so each group is a
    // consecutive run sharing its all-but-last lineage prefix.
    for (std::size_t g = 0; g < groups; ++g) {
        const auto &head = stage_output.lineage[g * last_filters];
        for (int s = 0; s < last_filters; ++s) {
            const auto &lin = stage_output.lineage[g * last_filters + s];
            if (lin.size() != head.size() ||
                !std::equal(head.begin(), head.end() - 1, lin.begin()) ||
                lin.back() != s)
                throw DataError("pool: lineage grouping incomplete");
        }
    }

    const int bins = 1 << last_filters;
    FeatureVector out;
    bool first_group = true;
    std::vector<BlockRect> blocks;
    for (std::size_t g = 0; g < groups; ++g) {
        std::vector<const GrayImage *> group;
        group.reserve(last_filters);
        for (int s = 0; s < last_filters; ++s)
            group.push_back(&stage_output.maps[g * last_filters + s]);
        HashedMap hashed = hash_maps(group);
        if (first_group) {
            blocks = partition_blocks(hashed.rows, hashed.cols, config.block_rows,
                                      config.block_cols, config.overlap_ratio);
            out.values.reserve(groups * blocks.size() * static_cast<std::size_t>(bins));
            first_group = false;
        }
        for (const BlockRect &b : blocks) {
            auto counts = block_histogram(hashed, b, bins);
            out.values.insert(out.values.end(), counts.begin(), counts.end());
        }
    }
    return out;
}

std::size_t feature_length(const NetConfig &config, int image_rows, int image_cols) {
    std::size_t groups = 1;
    for (int s = 0; s + 1 < config.stages; ++s)
        groups *= static_cast<std::size_t>(config.filters_per_stage[s]);
    auto blocks =
        partition_blocks(image_rows, image_cols, config.block_rows, config.block_cols,
                         config.overlap_ratio);
    return groups * blocks.size() * (std::size_t{1} << config.last_stage_filters());
}

}  // namespace kpcanet
