#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "kpcanet/config.hpp"
#include "kpcanet/ingest.hpp"
#include "kpcanet/model_io.hpp"
#include "kpcanet/pipeline.hpp"
#include "kpcanet/simd.hpp"

namespace {

using namespace kpcanet;

std::string kernel_summary(const KernelSpec &k) {
    std::ostringstream os;
    os << kernel_kind_name(k.kind);
    switch (k.kind) {
        case KernelKind::Linear: os << " (c=" << k.c << ")"; break;
        case KernelKind::Gaussian:
        case KernelKind::Exponential:
        case KernelKind::Laplacian:
        case KernelKind::Circular:
        case KernelKind::Spherical: os << " (sigma=" << k.sigma << ")"; break;
        case KernelKind::Polynomial: os << " (degree=" << k.degree << ")"; break;
        case KernelKind::Sigmoid: os << " (alpha=" << k.alpha << ", c=" << k.c << ")"; break;
        case KernelKind::RationalQuadratic:
        case KernelKind::InverseMultiquadric: os << " (c=" << k.c << ")"; break;
    }
    return os.str();
}

std::string join_ints(const std::vector<int> &v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    return os.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

std::string confusion_table(const Evaluation &ev) {
    std::ostringstream os;
    os << "confusion matrix (rows = true class, cols = predicted):\n";
    for (int t = 0; t < ev.class_count; ++t) {
        for (int p = 0; p < ev.class_count; ++p)
            os << (p ? " " : "  ")
               << ev.confusion[static_cast<std::size_t>(t) * ev.class_count + p];
        os << "\n";
    }
    return os.str();
}

std::string confusion_kv(const Evaluation &ev) {
    std::ostringstream os;
    for (int t = 0; t < ev.class_count; ++t) {
        os << "confusion_" << t << "=";
        for (int p = 0; p < ev.class_count; ++p)
            os << (p ? "," : "")
               << ev.confusion[static_cast<std::size_t>(t) * ev.class_count + p];
        os << "\n";
    }
    return os.str();
}

DatasetManifest manifest_from(const std::optional<std::string> &data_path,
                              const std::optional<std::string> &config_path) {
    if (data_path) return parse_run_config(*data_path).data;
    if (config_path) return parse_run_config(*config_path).data;
    throw ConfigError("no dataset: pass --data or --config");
}

int cmd_train(const std::string &config_path, const std::optional<std::string> &out_dir,
              const std::optional<std::uint64_t> &seed, const std::optional<int> &threads) {
    RunConfig cfg = parse_run_config(config_path);
    if (seed) cfg.net.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (out_dir) cfg.out_dir = *out_dir;
    std::filesystem::create_directories(cfg.out_dir);

    std::cerr << "loading dataset...\n";
    auto samples = load_dataset(cfg.data);
    std::cerr << "training on " << samples.size() << " samples ("
              << kernel_summary(cfg.net.kernel) << ", stages=" << cfg.net.stages
              << ", simd=" << simd::backend_name() << ")\n";

    auto t0 = std::chrono::steady_clock::now();
    TrainArtifacts art;
    Model model = train_model(samples, cfg.net, cfg.lambda, cfg.threads, &art);
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto model_path = cfg.out_dir / "model.kpcn";
    save_model(model_path, model);
    std::cerr << "model written to " << model_path.string() << "\n";

    std::ostringstream txt, kv;
    txt << "kpcanet training report\n";
    txt << "dataset: " << cfg.data.name << " (" << samples.size() << " samples, "
        << model.class_count << " classes)\n";
    txt << "kernel: " << kernel_summary(cfg.net.kernel) << "\n";
    txt << "stages: " << cfg.net.stages << "  filters: " << join_ints(cfg.net.filters_per_stage)
        << "  patch: " << cfg.net.patch_rows << "x" << cfg.net.patch_cols << "  block: "
        << cfg.net.block_rows << "x" << cfg.net.block_cols << "  overlap: "
        << cfg.net.overlap_ratio << "\n";
    txt << "patch budget: " << cfg.net.train_patch_budget << "  seed: " << cfg.net.seed
        << "  simd: " << simd::backend_name() << "\n";
    for (int s = 0; s < cfg.net.stages; ++s) {
        const auto &b = model.stage_bases[static_cast<std::size_t>(s)];
        txt << "stage " << (s + 1) << " eigenvalues:";
        for (int l = 0; l < b.num_components; ++l) txt << " " << b.eigenvalues(l);
        txt << "\n";
    }
    txt << "filter bank time: " << art.bases_seconds << " s\n";
    txt << "feature extraction time: " << art.feature_seconds << " s\n";
    txt << "classifier time: " << art.classifier_seconds << " s\n";
    txt << "total time: " << total << " s\n";
    txt << "training error: " << art.train_eval.error_rate() << " ("
        << (art.train_eval.total - art.train_eval.correct) << "/" << art.train_eval.total
        << ")\n";

    kv << "samples=" << samples.size() << "\n";
    kv << "classes=" << model.class_count << "\n";
    kv << "kernel=" << kernel_kind_name(cfg.net.kernel.kind) << "\n";
    kv << "stages=" << cfg.net.stages << "\n";
    kv << "seed=" << cfg.net.seed << "\n";
    kv << "simd=" << simd::backend_name() << "\n";
    for (int s = 0; s < cfg.net.stages; ++s) {
        const auto &b = model.stage_bases[static_cast<std::size_t>(s)];
        kv << "stage" << (s + 1) << "_eigenvalues=";
        for (int l = 0; l < b.num_components; ++l) kv << (l ? "," : "") << b.eigenvalues(l);
        kv << "\n";
    }
    kv << "bases_seconds=" << art.bases_seconds << "\n";
    kv << "feature_seconds=" << art.feature_seconds << "\n";
    kv << "classifier_seconds=" << art.classifier_seconds << "\n";
    kv << "total_seconds=" << total << "\n";
    kv << "train_error=" << art.train_eval.error_rate() << "\n";

    if (cfg.report_text) write_text_file(cfg.out_dir / "train_report.txt", txt.str());
    if (cfg.report_kv) write_text_file(cfg.out_dir / "train_report.kv", kv.str());
    std::cout << txt.str();
    return 0;
}

int cmd_eval(const std::string &model_path, const std::optional<std::string> &data_path,
             const std::optional<std::string> &config_path,
             const std::optional<std::string> &out_dir, const std::optional<int> &threads) {
    Model model = load_model(model_path);
    DatasetManifest manifest = manifest_from(data_path, config_path);
    auto samples = load_dataset(manifest);
    if (samples.empty()) throw DataError("no samples");

    Evaluation ev = evaluate_model(model, samples, threads.value_or(1));

    std::ostringstream txt, kv;
    txt << "kpcanet evaluation report\n";
    txt << "dataset: " << manifest.name << " (" << samples.size() << " samples)\n";
    txt << "error rate: " << ev.error_rate() << " (" << (ev.total - ev.correct) << "/"
        << ev.total << ")\n";
    txt << confusion_table(ev);
    kv << "samples=" << ev.total << "\n";
    kv << "error_rate=" << ev.error_rate() << "\n";
    kv << "correct=" << ev.correct << "\n";
    kv << confusion_kv(ev);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_text_file(std::filesystem::path(*out_dir) / "eval_report.txt", txt.str());
        write_text_file(std::filesystem::path(*out_dir) / "eval_report.kv", kv.str());
    }
    std::cout << txt.str();
    return 0;
}

void write_le_u64(std::ostream &out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char *>(b), 8);
}

int cmd_extract(const std::string &model_path, const std::optional<std::string> &data_path,
                const std::optional<std::string> &config_path, const std::string &out_path,
                const std::optional<int> &threads) {
    Model model = load_model(model_path);
    DatasetManifest manifest = manifest_from(data_path, config_path);
    auto samples = load_dataset(manifest);

    std::size_t dim = 0;
    std::vector<FeatureVector> features(samples.size());
    parallel_for(samples.size(), threads.value_or(1), [&](std::size_t i) {
        features[i] = extract_feature(samples[i].image, model.stage_bases, model.config);
    });
    if (!samples.empty()) dim = features.front().values.size();

    // Flat binary: u64 count, u64 dim, then count*dim float64, little-endian.
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + out_path);
    write_le_u64(out, samples.size());
    write_le_u64(out, dim);
    for (const auto &f : features) {
        for (std::uint32_t v : f.values) {
            double d = static_cast<double>(v);
            std::uint64_t bits;
            std::memcpy(&bits, &d, sizeof bits);
            write_le_u64(out, bits);
        }
    }
    if (!out) throw DataError("write failed: " + out_path);
    std::cerr << "wrote " << samples.size() << " x " << dim << " features to " << out_path
              << "\n";
    return 0;
}

int cmd_inspect(const std::string &model_path, const std::optional<std::string> &out_dir) {
    Model model = load_model(model_path);
    std::cout << "model format version: " << kModelFormatVersion << "\n";
    std::cout << "kernel: " << kernel_summary(model.config.kernel) << "\n";
    std::cout << "stages: " << model.config.stages << "  filters: "
              << join_ints(model.config.filters_per_stage) << "\n";
    std::cout << "patch: " << model.config.patch_rows << "x" << model.config.patch_cols
              << "  block: " << model.config.block_rows << "x" << model.config.block_cols
              << "  overlap: " << model.config.overlap_ratio << "\n";
    std::cout << "classes: " << model.class_count << "  feature dim: " << model.classifier.dim
              << "\n";
    for (std::size_t s = 0; s < model.stage_bases.size(); ++s) {
        const auto &b = model.stage_bases[s];
        std::cout << "stage " << (s + 1) << ": M=" << b.basis_patches.count()
                  << " basis patches, eigenvalues:";
        for (int l = 0; l < b.num_components; ++l) std::cout << " " << b.eigenvalues(l);
        std::cout << "\n";
    }
    if (model.config.kernel.kind == KernelKind::Linear) {
        std::filesystem::path dir = out_dir.value_or(".");
        std::filesystem::create_directories(dir);
        for (std::size_t s = 0; s < model.stage_bases.size(); ++s) {
            PatchMatrix filters = reconstruct_linear_filters(model.stage_bases[s]);
            for (int l = 0; l < filters.count(); ++l) {
                GrayImage img(model.config.patch_rows, model.config.patch_cols);
                double lo = filters.cols.col(l).minCoeff();
                double hi = filters.cols.col(l).maxCoeff();
                double span = hi > lo ? hi - lo : 1.0;
                for (int j = 0; j < filters.patch_dim(); ++j)
                    img.pixels[static_cast<std::size_t>(j)] =
                        (filters.cols(j, l) - lo) / span;
                char name[64];
                std::snprintf(name, sizeof name, "filter_s%zu_%02d.pgm", s + 1, l);
                write_pgm(dir / name, img);
                std::cout << "wrote " << (dir / name).string() << "\n";
            }
        }
    } else {
        std::cout << "no input-space filters exist for kernel "
                  << kernel_kind_name(model.config.kernel.kind)
                  << "; spectra above are the inspectable state\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{
        "kpcanet - kernel-PCA filter-bank image classifier\n"
        "exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure"};
    app.require_subcommand(1);

    std::optional<std::string> config_path, data_path, out_arg;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string model_path;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--threads", threads, "worker thread cap (default 1)");
    };

    auto *train = app.add_subcommand("train", "train a model from a config file");
    train->add_option("--config", config_path, "run configuration file")->required();
    train->add_option("--out", out_arg, "output directory (overrides config out_dir)");
    train->add_option("--seed", seed, "seed override");
    add_common(train);

    auto *eval = app.add_subcommand("eval", "evaluate a model on a dataset");
    eval->add_option("--model", model_path, "model file")->required();
    eval->add_option("--data", data_path, "dataset manifest file (key = value, data.* keys)");
    eval->add_option("--config", config_path, "run config providing the dataset");
    eval->add_option("--out", out_arg, "report output directory");
    add_common(eval);

    auto *extract = app.add_subcommand("extract", "write pooled features to a flat binary file");
    extract->add_option("--model", model_path, "model file")->required();
    extract->add_option("--data", data_path, "dataset manifest file");
    extract->add_option("--config", config_path, "run config providing the dataset");
    extract->add_option("--out", out_arg, "output feature file")->required();
    add_common(extract);

    auto *inspect = app.add_subcommand("inspect", "dump model internals");
    inspect->add_option("--model", model_path, "model file")->required();
    inspect->add_option("--out", out_arg, "directory for rendered filter images");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(*config_path, out_arg, seed, threads);
        if (eval->parsed()) return cmd_eval(model_path, data_path, config_path, out_arg, threads);
        if (extract->parsed())
            return cmd_extract(model_path, data_path, config_path, *out_arg, threads);
        if (inspect->parsed()) return cmd_inspect(model_path, out_arg);
    } catch (const kpcanet::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const kpcanet::DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const kpcanet::NumericError &e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
