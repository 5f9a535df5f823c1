#include "kpcanet/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "kpcanet/simd.hpp"

namespace kpcanet {

namespace {

constexpr double kGapTolerance = 1e-6;
constexpr int kMaxSweeps = 2000;

// L2-regularized hinge-loss SVM for one binary problem over pre-normalized
// rows, solved in the dual by cyclic coordinate descent (deterministic:
// fixed visiting order, no shrinking). Objective:
// (1/2)||w||^2 + C sum_i max(0, 1 - y_i w.x_i), bias folded in as a
// constant augmented feature. Stops when primal - dual <= tol*max(1,|primal|).
SolverTelemetry solve_binary(const FeatureTable &X, const std::vector<double> &qii,
                             const std::vector<signed char> &y, double C, double *w_out,
                             double *bias_out) {
    const std::size_t n = X.rows, d = X.dim;
    std::vector<double> w(d, 0.0);
    double wb = 0.0;  // weight of the augmented bias feature (value 1)
    std::vector<double> alpha(n, 0.0);

    SolverTelemetry tel;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            const float *xi = X.row(i);
            double margin = simd::dot_fd(w.data(), xi, d) + wb;
            double g = static_cast<double>(y[i]) * margin - 1.0;
            double pg = g;
            if (alpha[i] <= 0.0)
                pg = std::min(g, 0.0);
            else if (alpha[i] >= C)
                pg = std::max(g, 0.0);
            if (pg != 0.0) {
                double old = alpha[i];
                alpha[i] = std::clamp(old - g / qii[i], 0.0, C);
                double delta = (alpha[i] - old) * static_cast<double>(y[i]);
                if (delta != 0.0) {
                    simd::axpy_df(delta, xi, w.data(), d);
                    wb += delta;
                }
            }
        }
        // Duality gap after the sweep.
        double wnorm2 = simd::dot(w.data(), w.data(), d) + wb * wb;
        double hinge = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double margin = simd::dot_fd(w.data(), X.row(i), d) + wb;
            hinge += std::max(0.0, 1.0 - static_cast<double>(y[i]) * margin);
        }
        double primal = 0.5 * wnorm2 + C * hinge;
        double alpha_sum = 0.0;
        for (double a : alpha) alpha_sum += a;
        double dual = alpha_sum - 0.5 * wnorm2;
        tel.dual_objective_per_sweep.push_back(dual);
        tel.sweeps = sweep + 1;
        tel.final_duality_gap = primal - dual;
        if (tel.final_duality_gap <= kGapTolerance * std::max(1.0, std::abs(primal))) {
            tel.converged = true;
            break;
        }
    }
    std::copy(w.begin(), w.end(), w_out);
    *bias_out = wb;
    return tel;
}

std::vector<double> fit_scales(const FeatureTable &X) {
    std::vector<float> maxima(X.dim, 0.0f);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const float *row = X.row(i);
        for (std::size_t j = 0; j < X.dim; ++j)
            maxima[j] = std::max(maxima[j], std::abs(row[j]));
    }
    // Features that never fire keep scale 0 and contribute nothing.
    std::vector<double> scales(X.dim, 0.0);
    for (std::size_t j = 0; j < X.dim; ++j)
        scales[j] = maxima[j] > 0.0f ? 1.0 / static_cast<double>(maxima[j]) : 0.0;
    return scales;
}

}  // namespace

LinearModel train_linear_ovr(FeatureTable &features, const std::vector<int> &labels,
                             double lambda, int threads, TrainReport *report) {
    if (features.rows == 0) throw DataError("train_linear_ovr: no samples");
    if (features.rows != labels.size())
        throw DataError("train_linear_ovr: feature/label count mismatch");
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    std::set<int> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2) throw DataError("train_linear_ovr: need at least 2 classes");
    if (*distinct.begin() < 0) throw DataError("train_linear_ovr: negative label");
    const int classes = *distinct.rbegin() + 1;

    LinearModel model;
    model.class_count = classes;
    model.dim = features.dim;
    model.weights.assign(static_cast<std::size_t>(classes) * features.dim, 0.0);
    model.bias.assign(static_cast<std::size_t>(classes), 0.0);
    model.feature_scale = fit_scales(features);

    // Normalize the table in place once; all per-class solvers share it.
    for (std::size_t i = 0; i < features.rows; ++i) {
        float *row = features.row(i);
        for (std::size_t j = 0; j < features.dim; ++j)
            row[j] = static_cast<float>(row[j] * model.feature_scale[j]);
    }
    std::vector<double> qii(features.rows);
    for (std::size_t i = 0; i < features.rows; ++i) {
        const float *row = features.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < features.dim; ++j)
            s += static_cast<double>(row[j]) * static_cast<double>(row[j]);
        qii[i] = s + 1.0;
    }

    // C = 1/(lambda N): minimizing (1/2)||w||^2 + C sum hinge is the
    // lambda-scaled form of (lambda/2)||w||^2 + (1/N) sum hinge.
    const double C = 1.0 / (lambda * static_cast<double>(features.rows));

    if (report) report->per_class.assign(static_cast<std::size_t>(classes), {});
    parallel_for(static_cast<std::size_t>(classes), threads, [&](std::size_t k) {
        std::vector<signed char> y(features.rows);
        for (std::size_t i = 0; i < features.rows; ++i)
            y[i] = labels[i] == static_cast<int>(k) ? 1 : -1;
        SolverTelemetry tel = solve_binary(features, qii, y, C,
                                           model.weights.data() + k * features.dim,
                                           &model.bias[k]);
        if (report) report->per_class[k] = tel;
    });
    return model;
}

LinearModel train_linear_ovr(const std::vector<FeatureVector> &features,
                             const std::vector<int> &labels, double lambda,
                             TrainReport *report) {
    if (features.empty()) throw DataError("train_linear_ovr: no samples");
    FeatureTable table;
    table.resize(features.size(), features.front().values.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].values.size() != table.dim)
            throw DataError("train_linear_ovr: feature dimension mismatch");
        for (std::size_t j = 0; j < table.dim; ++j)
            table.row(i)[j] = static_cast<float>(features[i].values[j]);
    }
    return train_linear_ovr(table, labels, lambda, 1, report);
}

std::vector<double> decision_scores(const LinearModel &model, const float *feature,
                                    std::size_t dim) {
    if (dim != model.dim) throw DataError("predict: feature dimension mismatch");
    std::vector<float> xt(dim);
    for (std::size_t j = 0; j < dim; ++j)
        xt[j] = static_cast<float>(feature[j] * model.feature_scale[j]);
    std::vector<double> scores(static_cast<std::size_t>(model.class_count));
    for (int k = 0; k < model.class_count; ++k)
        scores[k] = simd::dot_fd(model.weights.data() + static_cast<std::size_t>(k) * dim,
                                 xt.data(), dim) +
                    model.bias[k];
    return scores;
}

int predict(const LinearModel &model, const float *feature, std::size_t dim) {
    auto scores = decision_scores(model, feature, dim);
    int best = 0;
    for (int k = 1; k < model.class_count; ++k)
        if (scores[k] > scores[best]) best = k;  // strict: ties keep lowest index
    return best;
}

int predict(const LinearModel &model, const FeatureVector &feature) {
    std::vector<float> buf(feature.values.size());
    for (std::size_t j = 0; j < buf.size(); ++j)
        buf[j] = static_cast<float>(feature.values[j]);
    return predict(model, buf.data(), buf.size());
}

Evaluation evaluate(const LinearModel &model, const std::vector<FeatureVector> &features,
                    const std::vector<int> &labels) {
    if (features.empty()) throw DataError("evaluate: no samples");
    if (features.size() != labels.size())
        throw DataError("evaluate: feature/label count mismatch");
    Evaluation ev(model.class_count);
    for (std::size_t i = 0; i < features.size(); ++i)
        ev.add(labels[i], predict(model, features[i]));
    return ev;
}

}  // namespace kpcanet
