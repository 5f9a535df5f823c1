#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kpcanet {

// Error categories map onto CLI exit codes (see tools/kpcanet.cpp).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An m x n grid of real-valued pixels, row-major. Ingested images are
/// normalized to [0,1]; filter responses reuse the same type with
/// unbounded values.
struct GrayImage {
    int rows = 0;
    int cols = 0;
    std::vector<double> pixels;  // rows*cols, row-major

    GrayImage() = default;
    GrayImage(int r, int c) : rows(r), cols(c), pixels(static_cast<std::size_t>(r) * c, 0.0) {}
    GrayImage(int r, int c, std::vector<double> px) : rows(r), cols(c), pixels(std::move(px)) {}

    double &at(int r, int c) { return pixels[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * cols + c]; }
    std::size_t size() const { return pixels.size(); }
};

/// Checks the ingestion contract: shape consistency, finite pixels in [0,1].
/// Throws DataError naming `what` on violation.
void validate_gray(const GrayImage &img, const std::string &what);

struct LabeledSample {
    GrayImage image;
    int label = 0;  // class index in [0, c)
};

enum class KernelKind {
    Linear,
    Gaussian,
    Polynomial,
    Exponential,
    Laplacian,
    Sigmoid,
    RationalQuadratic,
    InverseMultiquadric,
    Circular,
    Spherical,
};

/// One of the ten supported kernel functions plus its parameters.
/// Parameter defaults come from the published table; only the fields
/// relevant to `kind` are read.
struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    double c = 0.0;      // Linear / Sigmoid / RationalQuadratic / InverseMultiquadric
    double sigma = 1.0;  // Gaussian / Exponential / Laplacian / Circular / Spherical
    double alpha = 0.5;  // Sigmoid
    int degree = 3;      // Polynomial

    static KernelSpec defaults(KernelKind kind);

    /// Positive semi-definiteness is guaranteed for every kind except Sigmoid.
    bool psd_guaranteed() const { return kind != KernelKind::Sigmoid; }

    void validate() const;
};

const char *kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string &name);

struct NetConfig {
    int stages = 2;  // 1..3
    int patch_rows = 8;
    int patch_cols = 8;
    std::vector<int> filters_per_stage = {8, 8};
    KernelSpec kernel;
    int block_rows = 8;
    int block_cols = 8;
    double overlap_ratio = 0.5;  // [0,1)
    int train_patch_budget = 3000;
    std::uint64_t seed = 1;
    bool remove_patch_mean = false;
    bool share_stage_filters = false;

    int patch_dim() const { return patch_rows * patch_cols; }
    int last_stage_filters() const { return filters_per_stage.back(); }

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

/// Deterministic 64-bit generator (splitmix64). The algorithm is fixed so
/// that identical seeds give identical draw sequences on every platform.
/// Single-owner: parallel code must derive independent children via
/// `child()`, never share one stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform integer in [0, bound). Unbiased via power-of-two masking
    /// with rejection. bound must be nonzero.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0,1) with 53 random bits.
    double unit();

    /// Independent child stream: reseeds from the current parent state
    /// mixed with `stream`; does not advance the parent.
    Rng child(std::uint64_t stream) const;

    /// Fisher-Yates shuffle driven by below().
    template <typename T>
    void shuffle(std::vector<T> &v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// `count` distinct indices in [0, total), ascending. Uses Floyd's
    /// sampling so memory is O(count) even for huge totals.
    std::vector<std::uint64_t> sample_indices(std::uint64_t total, std::uint64_t count);

  private:
    std::uint64_t state_;
};

/// Seeded unstratified split: shuffles indices, takes `train_count` for the
/// train side. Order within each side is the shuffled order.
std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_dataset_count(
    const std::vector<LabeledSample> &samples, std::size_t train_count, Rng &rng);

/// Fraction variant; train count = llround(fraction * N), clamped so both
/// sides are nonempty when N >= 2.
std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_dataset(
    const std::vector<LabeledSample> &samples, double train_fraction, Rng &rng);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to preallocated, disjoint slots; chunk layout is fixed so
/// output does not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &fn);

}  // namespace kpcanet
