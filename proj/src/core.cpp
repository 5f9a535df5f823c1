#include "kpcanet/core.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace kpcanet {

void validate_gray(const GrayImage &img, const std::string &what) {
    if (img.rows <= 0 || img.cols <= 0)
        throw DataError(what + ": non-positive image shape");
    if (img.pixels.size() != static_cast<std::size_t>(img.rows) * img.cols)
        throw DataError(what + ": pixel buffer size does not match shape");
    for (double v : img.pixels) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw DataError(what + ": pixel outside [0,1]");
    }
}

KernelSpec KernelSpec::defaults(KernelKind kind) {
    KernelSpec s;
    s.kind = kind;
    switch (kind) {
        case KernelKind::Linear: s.c = 0.0; break;
        case KernelKind::Gaussian: s.sigma = 1.0; break;
        case KernelKind::Polynomial: s.degree = 3; break;
        case KernelKind::Exponential: s.sigma = 1.0; break;
        case KernelKind::Laplacian: s.sigma = 1.0; break;
        case KernelKind::Sigmoid: s.alpha = 0.5; s.c = -1.0; break;
        case KernelKind::RationalQuadratic: s.c = 1.0; break;
        case KernelKind::InverseMultiquadric: s.c = 1.0; break;
        case KernelKind::Circular: s.sigma = 0.2; break;
        case KernelKind::Spherical: s.sigma = 0.2; break;
    }
    return s;
}

void KernelSpec::validate() const {
    switch (kind) {
        case KernelKind::Gaussian:
        case KernelKind::Exponential:
        case KernelKind::Laplacian:
        case KernelKind::Circular:
        case KernelKind::Spherical:
            if (!(sigma > 0.0)) throw ConfigError("kernel sigma must be > 0");
            break;
        case KernelKind::Polynomial:
            if (degree < 1) throw ConfigError("kernel degree must be a positive integer");
            break;
        case KernelKind::InverseMultiquadric:
            if (c == 0.0) throw ConfigError("inverse multiquadric c must be nonzero");
            break;
        case KernelKind::RationalQuadratic:
            if (!(c > 0.0)) throw ConfigError("rational quadratic c must be > 0");
            break;
        case KernelKind::Linear:
        case KernelKind::Sigmoid:
            break;
    }
}

namespace {
struct KernelName {
    KernelKind kind;
    const char *name;
};
constexpr KernelName kKernelNames[] = {
    {KernelKind::Linear, "linear"},
    {KernelKind::Gaussian, "gaussian"},
    {KernelKind::Polynomial, "polynomial"},
    {KernelKind::Exponential, "exponential"},
    {KernelKind::Laplacian, "laplacian"},
    {KernelKind::Sigmoid, "sigmoid"},
    {KernelKind::RationalQuadratic, "rational_quadratic"},
    {KernelKind::InverseMultiquadric, "inverse_multiquadric"},
    {KernelKind::Circular, "circular"},
    {KernelKind::Spherical, "spherical"},
};
}  // namespace

const char *kernel_kind_name(KernelKind kind) {
    for (const auto &kn : kKernelNames)
        if (kn.kind == kind) return kn.name;
    return "unknown";
}

KernelKind kernel_kind_from_name(const std::string &name) {
    for (const auto &kn : kKernelNames)
        if (name == kn.name) return kn.kind;
    throw ConfigError("unknown kernel: " + name);
}

void NetConfig::validate() const {
    if (stages < 1 || stages > 3)
        throw ConfigError("stages must be in [1,3]");
    if (patch_rows < 1 || patch_cols < 1)
        throw ConfigError("patch dimensions must be positive");
    if (filters_per_stage.size() != static_cast<std::size_t>(stages))
        throw ConfigError("filters_per_stage length must equal stages");
    for (int L : filters_per_stage) {
        if (L < 1) throw ConfigError("filter count must be positive");
        if (L > train_patch_budget)
            throw ConfigError("filter count exceeds train_patch_budget");
    }
    if (filters_per_stage.back() > 16)
        throw ConfigError("bin count exceeds 2^16: last-stage filter count must be <= 16");
    if (block_rows < 1 || block_cols < 1)
        throw ConfigError("block dimensions must be positive");
    if (!(overlap_ratio >= 0.0 && overlap_ratio < 1.0))
        throw ConfigError("overlap_ratio must be in [0,1)");
    if (train_patch_budget < 1)
        throw ConfigError("train_patch_budget must be positive");
    if (share_stage_filters) {
        for (int L : filters_per_stage)
            if (L != filters_per_stage.front())
                throw ConfigError("share_stage_filters requires equal filter counts per stage");
    }
    kernel.validate();
}

namespace {
inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be nonzero");
    if (bound == 1) return 0;
    // Mask to the next power of two, reject out-of-range draws.
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
        std::uint64_t draw = next_u64() & mask;
        if (draw < bound) return draw;
    }
}

double Rng::unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Rng Rng::child(std::uint64_t stream) const {
    std::uint64_t s = state_ ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    return Rng(splitmix64(s));
}

std::vector<std::uint64_t> Rng::sample_indices(std::uint64_t total, std::uint64_t count) {
    count = std::min(count, total);
    std::set<std::uint64_t> picked;
    // Floyd's algorithm: uniform subset of size `count` from [0, total).
    for (std::uint64_t i = total - count; i < total; ++i) {
        std::uint64_t j = below(i + 1);
        if (!picked.insert(j).second) picked.insert(i);
    }
    return {picked.begin(), picked.end()};
}

std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_dataset_count(
    const std::vector<LabeledSample> &samples, std::size_t train_count, Rng &rng) {
    if (samples.empty()) throw DataError("empty dataset");
    if (train_count > samples.size())
        throw DataError("train count exceeds dataset size");
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<LabeledSample> train, test;
    train.reserve(train_count);
    test.reserve(samples.size() - train_count);
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < train_count ? train : test).push_back(samples[order[i]]);
    return {std::move(train), std::move(test)};
}

std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_dataset(
    const std::vector<LabeledSample> &samples, double train_fraction, Rng &rng) {
    if (samples.empty()) throw DataError("empty dataset");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("train fraction must be in (0,1)");
    auto count = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(samples.size())));
    if (samples.size() >= 2) {
        count = std::max<std::size_t>(count, 1);
        count = std::min(count, samples.size() - 1);
    }
    return split_dataset_count(samples, count, rng);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &fn) {
    if (count == 0) return;
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : 1;
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    // Fixed contiguous chunking: worker w handles [w*chunk, ...) regardless
    // of scheduling, so any write-to-own-slot usage is deterministic.
    std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto &t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace kpcanet
