#pragma once

#include <vector>

#include "kpcanet/classifier.hpp"
#include "kpcanet/network.hpp"
#include "kpcanet/pooling.hpp"

namespace kpcanet {

/// Bookkeeping from a full training run, for reports.
struct TrainArtifacts {
    double bases_seconds = 0.0;
    double feature_seconds = 0.0;
    double classifier_seconds = 0.0;
    Evaluation train_eval;
    TrainReport classifier_report;
};

/// forward + pool for one image.
FeatureVector extract_feature(const GrayImage &image, const std::vector<KpcaBasis> &bases,
                              const NetConfig &config);

/// Full training: stage bases, then pooled features of the training set,
/// then the one-vs-rest classifier. Deterministic given config.seed.
Model train_model(const std::vector<LabeledSample> &train, const NetConfig &net, double lambda,
                  int threads = 1, TrainArtifacts *artifacts = nullptr);

int predict_image(const Model &model, const GrayImage &image);

/// Per-image forward/pool/predict over a labeled set; parallel across
/// images with deterministic results (predictions land in fixed slots).
Evaluation evaluate_model(const Model &model, const std::vector<LabeledSample> &samples,
                          int threads = 1);

}  // namespace kpcanet
