#include "kpcanet/network.hpp"

#include <algorithm>

#include "kpcanet/patches.hpp"

namespace kpcanet {

namespace {

std::vector<GrayImage> apply_to_grid(const GrayImage &grid, const KpcaBasis &basis, int k1,
                                     int k2, bool remove_mean) {
    PatchMatrix patches = extract_dense(grid, k1, k2, remove_mean);
    Eigen::MatrixXd proj = project(basis, patches);  // L x (rows*cols)
    const int L = basis.num_components;
    std::vector<GrayImage> maps;
    maps.reserve(L);
    for (int l = 0; l < L; ++l) {
        GrayImage map(grid.rows, grid.cols);
        for (int j = 0; j < proj.cols(); ++j)
            map.pixels[static_cast<std::size_t>(j)] = proj(l, j);
        maps.push_back(std::move(map));
    }
    return maps;
}

}  // namespace

std::vector<std::vector<GrayImage>> apply_stage(const std::vector<GrayImage> &images,
                                                const KpcaBasis &basis, int k1, int k2,
                                                bool remove_mean) {
    if (basis.basis_patches.patch_dim() != k1 * k2)
        throw DataError("apply_stage: basis patch dimension does not match k1*k2");
    std::vector<std::vector<GrayImage>> out(images.size());
    for (std::size_t i = 0; i < images.size(); ++i)
        out[i] = apply_to_grid(images[i], basis, k1, k2, remove_mean);
    return out;
}

namespace {

// Uniform budgeted draw of patches from the stage-s input pool without
// materializing it: global patch indices are sampled first, then grouped by
// source grid and extracted image by image. Grids are visited in a fixed
// order (image-major, then map lineage), so the draw is deterministic.
PatchMatrix sample_stage_patches(const std::vector<LabeledSample> &train,
                                 const std::vector<KpcaBasis> &previous_bases,
                                 const NetConfig &config, Rng &rng, int stage) {
    const int k1 = config.patch_rows, k2 = config.patch_cols;
    const int m = train.front().image.rows, n = train.front().image.cols;
    std::size_t maps_per_image = 1;
    for (int s = 0; s < stage; ++s)
        maps_per_image *= static_cast<std::size_t>(config.filters_per_stage[s]);
    const std::uint64_t pixels_per_grid = static_cast<std::uint64_t>(m) * n;
    const std::uint64_t total =
        static_cast<std::uint64_t>(train.size()) * maps_per_image * pixels_per_grid;
    const std::uint64_t budget =
        std::min<std::uint64_t>(config.train_patch_budget, total);

    std::vector<std::uint64_t> picked = rng.sample_indices(total, budget);  // ascending

    PatchMatrix out(k1 * k2, static_cast<int>(picked.size()));
    std::size_t next = 0;
    const std::uint64_t patches_per_image = maps_per_image * pixels_per_grid;
    for (std::size_t img = 0; img < train.size() && next < picked.size(); ++img) {
        const std::uint64_t img_begin = static_cast<std::uint64_t>(img) * patches_per_image;
        const std::uint64_t img_end = img_begin + patches_per_image;
        if (picked[next] >= img_end) continue;

        // Grids for this image at stage `stage` (the image itself for stage 0).
        std::vector<GrayImage> grids{train[img].image};
        for (int s = 0; s < stage; ++s) {
            std::vector<GrayImage> next_grids;
            for (const GrayImage &g : grids) {
                auto maps = apply_to_grid(g, previous_bases[s], k1, k2,
                                          config.remove_patch_mean);
                for (auto &mp : maps) next_grids.push_back(std::move(mp));
            }
            grids = std::move(next_grids);
        }

        PatchMatrix per_grid;
        std::size_t cached_grid = maps_per_image;  // invalid
        while (next < picked.size() && picked[next] < img_end) {
            const std::uint64_t local = picked[next] - img_begin;
            const std::size_t grid_idx = static_cast<std::size_t>(local / pixels_per_grid);
            const int pixel = static_cast<int>(local % pixels_per_grid);
            if (grid_idx != cached_grid) {
                per_grid = extract_dense(grids[grid_idx], k1, k2, config.remove_patch_mean);
                cached_grid = grid_idx;
            }
            out.cols.col(static_cast<int>(next)) = per_grid.cols.col(pixel);
            ++next;
        }
    }
    return out;
}

}  // namespace

std::vector<KpcaBasis> train_network(const std::vector<LabeledSample> &train,
                                     const NetConfig &config, Rng &rng) {
    if (train.empty()) throw DataError("train_network: empty training set");
    config.validate();
    const int m = train.front().image.rows, n = train.front().image.cols;
    for (const auto &s : train)
        if (s.image.rows != m || s.image.cols != n)
            throw DataError("train_network: images must share one shape");

    std::vector<KpcaBasis> bases;
    bases.reserve(config.stages);
    for (int stage = 0; stage < config.stages; ++stage) {
        if (config.share_stage_filters && stage > 0) {
            bases.push_back(bases.front());
            continue;
        }
        Rng stage_rng = rng.child(static_cast<std::uint64_t>(stage));
        PatchMatrix pool = sample_stage_patches(train, bases, config, stage_rng, stage);
        try {
            bases.push_back(
                learn_filters(pool, config.kernel, config.filters_per_stage[stage]));
        } catch (const NumericError &e) {
            throw NumericError("stage " + std::to_string(stage + 1) + ": " + e.what());
        }
    }
    return bases;
}

StageOutput forward(const GrayImage &image, const std::vector<KpcaBasis> &stage_bases,
                    const NetConfig &config, int source_index) {
    if (stage_bases.size() != static_cast<std::size_t>(config.stages))
        throw ConfigError("forward: stage count mismatch");
    StageOutput out;
    out.source_index = source_index;
    out.maps = {image};
    out.lineage = {{}};
    for (int stage = 0; stage < config.stages; ++stage) {
        auto per_grid = apply_stage(out.maps, stage_bases[stage], config.patch_rows,
                                    config.patch_cols, config.remove_patch_mean);
        std::vector<GrayImage> maps;
        std::vector<std::vector<int>> lineage;
        maps.reserve(out.maps.size() * per_grid.front().size());
        lineage.reserve(maps.capacity());
        for (std::size_t g = 0; g < per_grid.size(); ++g) {
            for (std::size_t l = 0; l < per_grid[g].size(); ++l) {
                maps.push_back(std::move(per_grid[g][l]));
                auto tuple = out.lineage[g];
                tuple.push_back(static_cast<int>(l));
                lineage.push_back(std::move(tuple));
            }
        }
        out.maps = std::move(maps);
        out.lineage = std::move(lineage);
    }
    return out;
}

}  // namespace kpcanet
