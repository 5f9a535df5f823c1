#pragma once

#include <cstdint>
#include <vector>

#include "kpcanet/core.hpp"
#include "kpcanet/pooling.hpp"

namespace kpcanet {

/// One-vs-rest linear classifier. Feature normalization (scale to unit max,
/// fit on training data) is part of the model.
struct LinearModel {
    int class_count = 0;
    std::size_t dim = 0;
    std::vector<double> weights;        // class_count x dim, row-major
    std::vector<double> bias;           // class_count
    std::vector<double> feature_scale;  // dim, multiplicative (1/train max)
};

/// Row-major N x D float matrix; the classifier's working representation.
struct FeatureTable {
    std::size_t rows = 0;
    std::size_t dim = 0;
    std::vector<float> data;

    float *row(std::size_t i) { return data.data() + i * dim; }
    const float *row(std::size_t i) const { return data.data() + i * dim; }
    void resize(std::size_t n, std::size_t d) {
        rows = n;
        dim = d;
        data.assign(n * d, 0.0f);
    }
};

/// Per-class training telemetry from the dual coordinate descent solver.
/// The dual objective is monotonically non-decreasing by construction; the
/// solver's own objective (its negation) therefore decreases monotonically.
struct SolverTelemetry {
    std::vector<double> dual_objective_per_sweep;
    double final_duality_gap = 0.0;
    int sweeps = 0;
    bool converged = false;
};

struct TrainReport {
    std::vector<SolverTelemetry> per_class;
};

/// Trains c one-vs-rest L2-regularized hinge-loss linear classifiers with
/// deterministic cyclic dual coordinate descent, stopping when the duality
/// gap falls below 1e-6 of the objective scale. Features are normalized
/// per-feature to unit max first; the table is normalized IN PLACE and
/// should not be reused by the caller. Deterministic given inputs.
LinearModel train_linear_ovr(FeatureTable &features, const std::vector<int> &labels,
                             double lambda, int threads = 1, TrainReport *report = nullptr);

/// Convenience overload over pooled integer features.
LinearModel train_linear_ovr(const std::vector<FeatureVector> &features,
                             const std::vector<int> &labels, double lambda,
                             TrainReport *report = nullptr);

/// argmax over class scores w.x~ + b on the normalized feature; ties break
/// toward the lowest class index.
int predict(const LinearModel &model, const float *feature, std::size_t dim);
int predict(const LinearModel &model, const FeatureVector &feature);

/// Raw per-class scores (after normalization), exposed for tests.
std::vector<double> decision_scores(const LinearModel &model, const float *feature,
                                    std::size_t dim);

struct Evaluation {
    std::vector<std::uint64_t> confusion;  // class_count x class_count, row = true
    int class_count = 0;
    std::uint64_t total = 0;
    std::uint64_t correct = 0;

    explicit Evaluation(int classes = 0)
        : confusion(static_cast<std::size_t>(classes) * classes, 0), class_count(classes) {}
    void add(int truth, int predicted) {
        ++confusion[static_cast<std::size_t>(truth) * class_count + predicted];
        ++total;
        if (truth == predicted) ++correct;
    }
    double error_rate() const {
        return total == 0 ? 0.0 : 1.0 - static_cast<double>(correct) / static_cast<double>(total);
    }
};

/// Error rate and confusion matrix over labeled features.
Evaluation evaluate(const LinearModel &model, const std::vector<FeatureVector> &features,
                    const std::vector<int> &labels);

}  // namespace kpcanet
