#pragma once

#include <vector>

#include "kpcanet/core.hpp"

namespace kpcanet {

/// Maps produced by running an image through the filter cascade. Maps keep
/// the source image's shape (filtering is same-size via zero padding) and
/// carry unbounded real values. Lineage tuple i holds the per-stage filter
/// indices that produced map i; tuples are unique and lexicographically
/// ordered.
struct StageOutput {
    int source_index = -1;
    std::vector<GrayImage> maps;
    std::vector<std::vector<int>> lineage;
};

}  // namespace kpcanet
