#pragma once

#include <vector>

#include "kpcanet/classifier.hpp"
#include "kpcanet/core.hpp"
#include "kpcanet/kpca.hpp"
#include "kpcanet/network_types.hpp"

namespace kpcanet {

/// A fully trained network: per-stage filter banks, pooling geometry (in
/// config), and the linear classifier.
struct Model {
    NetConfig config;
    std::vector<KpcaBasis> stage_bases;
    LinearModel classifier;
    int class_count = 0;
};

/// Runs one filter bank over a list of grids: dense patches (zero-padded,
/// mean-removed per flag) are projected onto the basis; map l at pixel j is
/// projection component l of patch j. Output maps keep the input shape.
std::vector<std::vector<GrayImage>> apply_stage(const std::vector<GrayImage> &images,
                                                const KpcaBasis &basis, int k1, int k2,
                                                bool remove_mean);

/// Learns the per-stage bases. Stage 1 draws from dense patches of the
/// training images; stage s>1 draws from dense patches pooled uniformly
/// across all stage-(s-1) output maps of all training images. Each stage's
/// pool is capped at config.train_patch_budget (budgeted index sampling, so
/// the full pool is never materialized). With config.share_stage_filters,
/// the stage-1 basis is reused for every later stage.
std::vector<KpcaBasis> train_network(const std::vector<LabeledSample> &train,
                                     const NetConfig &config, Rng &rng);

/// Full cascade for one image: maps after S stages number
/// L_1 * ... * L_S, each tagged with its lineage tuple in lexicographic
/// order so pooling can regroup by all-but-last index.
StageOutput forward(const GrayImage &image, const std::vector<KpcaBasis> &stage_bases,
                    const NetConfig &config, int source_index = -1);

}  // namespace kpcanet
