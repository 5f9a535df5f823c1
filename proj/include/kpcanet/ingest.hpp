#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kpcanet/core.hpp"

namespace kpcanet {

/// Where a dataset comes from and what it must look like. All loaded
/// images are validated against the declared shape.
struct DatasetManifest {
    std::string name;
    enum class Source { IdxPair, ImageDir } source = Source::IdxPair;
    std::filesystem::path images_path;  // IdxPair
    std::filesystem::path labels_path;  // IdxPair
    std::filesystem::path root_dir;     // ImageDir
    int class_count = 0;
    int rows = 0;
    int cols = 0;
};

/// Big-endian IDX image file (magic 0x00000803): unsigned byte pixels
/// scaled to [0,1] by /255.
std::vector<GrayImage> read_idx_images(const std::filesystem::path &path);

/// Big-endian IDX label file (magic 0x00000801): one unsigned byte per item.
std::vector<int> read_idx_labels(const std::filesystem::path &path);

void write_idx_images(const std::filesystem::path &path, const std::vector<GrayImage> &images);
void write_idx_labels(const std::filesystem::path &path, const std::vector<int> &labels);

struct ImageDirResult {
    std::vector<LabeledSample> samples;
    int skipped_files = 0;  // non-PGM entries skipped with a warning
};

/// One subdirectory per class, each holding binary 8-bit PGM (P5) files.
/// Labels follow sorted subdirectory order; files are read in sorted name
/// order, so two ingestions of the same tree agree exactly.
ImageDirResult read_image_dir(const std::filesystem::path &root, const DatasetManifest &manifest);

GrayImage read_pgm(const std::filesystem::path &path);

/// Writes P5 with maxval 255; values are clamped to [0,1] and quantized.
void write_pgm(const std::filesystem::path &path, const GrayImage &image);

/// Loads and validates the manifest's dataset.
std::vector<LabeledSample> load_dataset(const DatasetManifest &manifest);

}  // namespace kpcanet
