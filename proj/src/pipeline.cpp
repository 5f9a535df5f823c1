#include "kpcanet/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "kpcanet/simd.hpp"

namespace kpcanet {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

FeatureVector extract_feature(const GrayImage &image, const std::vector<KpcaBasis> &bases,
                              const NetConfig &config) {
    StageOutput out = forward(image, bases, config);
    return pool(out, config);
}

Model train_model(const std::vector<LabeledSample> &train, const NetConfig &net, double lambda,
                  int threads, TrainArtifacts *artifacts) {
    if (train.empty()) throw DataError("train_model: empty training set");
    net.validate();

    Model model;
    model.config = net;
    Rng rng(net.seed);

    auto t0 = std::chrono::steady_clock::now();
    model.stage_bases = train_network(train, net, rng);
    if (artifacts) artifacts->bases_seconds = seconds_since(t0);

    // Pooled features of the training set, straight into the classifier's
    // float table (the integer feature vectors are transient per image).
    t0 = std::chrono::steady_clock::now();
    const int m = train.front().image.rows, n = train.front().image.cols;
    const std::size_t dim = feature_length(net, m, n);
    FeatureTable table;
    table.resize(train.size(), dim);
    std::vector<int> labels(train.size());
    int max_label = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        labels[i] = train[i].label;
        max_label = std::max(max_label, train[i].label);
    }
    parallel_for(train.size(), threads, [&](std::size_t i) {
        FeatureVector f = extract_feature(train[i].image, model.stage_bases, net);
        if (f.values.size() != dim)
            throw DataError("train_model: unexpected feature length");
        float *row = table.row(i);
        for (std::size_t j = 0; j < dim; ++j)
            row[j] = static_cast<float>(f.values[j]);
    });
    if (artifacts) artifacts->feature_seconds = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    TrainReport report;
    model.classifier = train_linear_ovr(table, labels, lambda, threads, &report);
    model.class_count = model.classifier.class_count;
    if (artifacts) {
        artifacts->classifier_seconds = seconds_since(t0);
        artifacts->classifier_report = std::move(report);
        // Training error straight off the (now normalized) table.
        Evaluation ev(model.class_count);
        for (std::size_t i = 0; i < train.size(); ++i) {
            const float *row = table.row(i);
            int best = 0;
            double best_score = 0.0;
            for (int k = 0; k < model.class_count; ++k) {
                double s = simd::dot_fd(
                               model.classifier.weights.data() +
                                   static_cast<std::size_t>(k) * dim,
                               row, dim) +
                           model.classifier.bias[k];
                if (k == 0 || s > best_score) {
                    best_score = s;
                    best = k;
                }
            }
            ev.add(labels[i], best);
        }
        artifacts->train_eval = ev;
    }
    return model;
}

int predict_image(const Model &model, const GrayImage &image) {
    FeatureVector f = extract_feature(image, model.stage_bases, model.config);
    return predict(model.classifier, f);
}

Evaluation evaluate_model(const Model &model, const std::vector<LabeledSample> &samples,
                          int threads) {
    if (samples.empty()) throw DataError("no samples");
    std::vector<int> predictions(samples.size());
    parallel_for(samples.size(), threads, [&](std::size_t i) {
        predictions[i] = predict_image(model, samples[i].image);
    });
    Evaluation ev(model.class_count);
    for (std::size_t i = 0; i < samples.size(); ++i)
        ev.add(samples[i].label, predictions[i]);
    return ev;
}

}  // namespace kpcanet
