#include "kpcanet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>

namespace kpcanet {

namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream &in, const std::string &what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char *>(b), 4))
        throw DataError("truncated " + what);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ostream &out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char *>(b), 4);
}

std::ifstream open_binary(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

}  // namespace

std::vector<GrayImage> read_idx_images(const std::filesystem::path &path) {
    auto in = open_binary(path);
    if (read_be32(in, "IDX header") != kIdxImageMagic)
        throw DataError(path.string() + ": not an IDX image file");
    const std::uint32_t count = read_be32(in, "IDX header");
    const std::uint32_t rows = read_be32(in, "IDX header");
    const std::uint32_t cols = read_be32(in, "IDX header");
    if (rows == 0 || cols == 0) throw DataError(path.string() + ": zero image dimensions");

    std::vector<GrayImage> images;
    images.reserve(count);
    std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size())))
            throw DataError(path.string() + ": short read at image " + std::to_string(i));
        GrayImage img(static_cast<int>(rows), static_cast<int>(cols));
        for (std::size_t j = 0; j < buf.size(); ++j)
            img.pixels[j] = static_cast<double>(buf[j]) / 255.0;
        images.push_back(std::move(img));
    }
    return images;
}

std::vector<int> read_idx_labels(const std::filesystem::path &path) {
    auto in = open_binary(path);
    if (read_be32(in, "IDX header") != kIdxLabelMagic)
        throw DataError(path.string() + ": not an IDX label file");
    const std::uint32_t count = read_be32(in, "IDX header");
    std::vector<int> labels(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        unsigned char b;
        if (!in.read(reinterpret_cast<char *>(&b), 1))
            throw DataError(path.string() + ": short read at label " + std::to_string(i));
        labels[i] = b;
    }
    return labels;
}

void write_idx_images(const std::filesystem::path &path, const std::vector<GrayImage> &images) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_be32(out, kIdxImageMagic);
    write_be32(out, static_cast<std::uint32_t>(images.size()));
    const int rows = images.empty() ? 0 : images.front().rows;
    const int cols = images.empty() ? 0 : images.front().cols;
    write_be32(out, static_cast<std::uint32_t>(rows));
    write_be32(out, static_cast<std::uint32_t>(cols));
    for (const auto &img : images) {
        for (double v : img.pixels) {
            double q = std::clamp(v, 0.0, 1.0) * 255.0;
            unsigned char b = static_cast<unsigned char>(std::llround(q));
            out.write(reinterpret_cast<const char *>(&b), 1);
        }
    }
    if (!out) throw DataError("write failed: " + path.string());
}

void write_idx_labels(const std::filesystem::path &path, const std::vector<int> &labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_be32(out, kIdxLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (int l : labels) {
        unsigned char b = static_cast<unsigned char>(l);
        out.write(reinterpret_cast<const char *>(&b), 1);
    }
    if (!out) throw DataError("write failed: " + path.string());
}

namespace {

// Skips PGM whitespace and '#' comments.
int pgm_token(std::istream &in, const std::string &path) {
    int ch = in.get();
    for (;;) {
        while (ch != EOF && std::isspace(ch)) ch = in.get();
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
            continue;
        }
        break;
    }
    if (ch == EOF || !std::isdigit(ch)) throw DataError(path + ": malformed PGM header");
    int value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        ch = in.get();
    }
    return value;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path &path) {
    auto in = open_binary(path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5') throw DataError(path.string() + ": not a binary PGM (P5) file");
    const int cols = pgm_token(in, path.string());
    const int rows = pgm_token(in, path.string());
    const int maxval = pgm_token(in, path.string());
    if (rows <= 0 || cols <= 0) throw DataError(path.string() + ": bad PGM dimensions");
    if (maxval < 1 || maxval > 255)
        throw DataError(path.string() + ": unsupported PGM maxval " + std::to_string(maxval));
    // pgm_token consumed exactly one whitespace byte after maxval via its
    // trailing get(); raster starts here.
    GrayImage img(rows, cols);
    std::vector<unsigned char> buf(img.size());
    if (!in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size())))
        throw DataError(path.string() + ": truncated PGM raster");
    for (std::size_t i = 0; i < buf.size(); ++i)
        img.pixels[i] = static_cast<double>(buf[i]) / static_cast<double>(maxval);
    return img;
}

void write_pgm(const std::filesystem::path &path, const GrayImage &image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "P5\n" << image.cols << " " << image.rows << "\n255\n";
    for (double v : image.pixels) {
        unsigned char b = static_cast<unsigned char>(std::llround(std::clamp(v, 0.0, 1.0) * 255.0));
        out.write(reinterpret_cast<const char *>(&b), 1);
    }
    if (!out) throw DataError("write failed: " + path.string());
}

ImageDirResult read_image_dir(const std::filesystem::path &root,
                              const DatasetManifest &manifest) {
    if (!std::filesystem::is_directory(root))
        throw DataError(root.string() + ": not a directory");
    std::vector<std::filesystem::path> class_dirs;
    for (const auto &entry : std::filesystem::directory_iterator(root))
        if (entry.is_directory()) class_dirs.push_back(entry.path());
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) throw DataError(root.string() + ": no class directories");

    ImageDirResult result;
    for (std::size_t label = 0; label < class_dirs.size(); ++label) {
        std::vector<std::filesystem::path> files;
        for (const auto &entry : std::filesystem::directory_iterator(class_dirs[label]))
            if (entry.is_regular_file()) files.push_back(entry.path());
        std::sort(files.begin(), files.end());

        int loaded = 0;
        for (const auto &file : files) {
            GrayImage img;
            try {
                img = read_pgm(file);
            } catch (const DataError &e) {
                std::cerr << "warning: skipping " << file.string() << ": " << e.what() << "\n";
                ++result.skipped_files;
                continue;
            }
            if (manifest.rows > 0 &&
                (img.rows != manifest.rows || img.cols != manifest.cols))
                throw DataError(file.string() + ": shape " + std::to_string(img.rows) + "x" +
                                std::to_string(img.cols) + " does not match declared " +
                                std::to_string(manifest.rows) + "x" +
                                std::to_string(manifest.cols));
            result.samples.push_back({std::move(img), static_cast<int>(label)});
            ++loaded;
        }
        if (loaded == 0)
            throw DataError(class_dirs[label].string() + ": class with no samples");
    }
    return result;
}

std::vector<LabeledSample> load_dataset(const DatasetManifest &manifest) {
    std::vector<LabeledSample> samples;
    if (manifest.source == DatasetManifest::Source::IdxPair) {
        auto images = read_idx_images(manifest.images_path);
        auto labels = read_idx_labels(manifest.labels_path);
        if (images.size() != labels.size())
            throw DataError("image/label count mismatch: " + std::to_string(images.size()) +
                            " images vs " + std::to_string(labels.size()) + " labels");
        samples.reserve(images.size());
        for (std::size_t i = 0; i < images.size(); ++i)
            samples.push_back({std::move(images[i]), labels[i]});
    } else {
        samples = read_image_dir(manifest.root_dir, manifest).samples;
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto &s = samples[i];
        validate_gray(s.image, "sample " + std::to_string(i));
        if (manifest.rows > 0 && (s.image.rows != manifest.rows || s.image.cols != manifest.cols))
            throw DataError("sample " + std::to_string(i) + ": shape mismatch with manifest");
        if (manifest.class_count > 0 && (s.label < 0 || s.label >= manifest.class_count))
            throw DataError("sample " + std::to_string(i) + ": label " +
                            std::to_string(s.label) + " outside [0," +
                            std::to_string(manifest.class_count) + ")");
    }
    return samples;
}

}  // namespace kpcanet
