#include "kpcanet/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace kpcanet {

namespace {

std::string trim(const std::string &s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string &key, const std::string &value) {
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception &) {
        throw ConfigError(key + ": expected integer, got '" + value + "'");
    }
}

double parse_double(const std::string &key, const std::string &value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception &) {
        throw ConfigError(key + ": expected number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string &key, const std::string &value) {
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception &) {
        throw ConfigError(key + ": expected unsigned integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key + ": expected boolean, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string &key, const std::string &value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_int(key, trim(item)));
    if (out.empty()) throw ConfigError(key + ": expected comma-separated integers");
    return out;
}

}  // namespace

RunConfig parse_run_config_text(const std::string &text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw ConfigError("duplicate key: " + key);
    }

    RunConfig cfg;
    // The kernel name resets parameters to the published defaults, so it is
    // applied before any kernel.* override regardless of line order.
    if (auto it = kv.find("kernel"); it != kv.end())
        cfg.net.kernel = KernelSpec::defaults(kernel_kind_from_name(it->second));
    for (const auto &[key, value] : kv) {
        if (key == "stages") cfg.net.stages = parse_int(key, value);
        else if (key == "patch_rows") cfg.net.patch_rows = parse_int(key, value);
        else if (key == "patch_cols") cfg.net.patch_cols = parse_int(key, value);
        else if (key == "filters") cfg.net.filters_per_stage = parse_int_list(key, value);
        else if (key == "kernel") continue;
        else if (key == "kernel.c") cfg.net.kernel.c = parse_double(key, value);
        else if (key == "kernel.sigma") cfg.net.kernel.sigma = parse_double(key, value);
        else if (key == "kernel.alpha") cfg.net.kernel.alpha = parse_double(key, value);
        else if (key == "kernel.degree") cfg.net.kernel.degree = parse_int(key, value);
        else if (key == "block_rows") cfg.net.block_rows = parse_int(key, value);
        else if (key == "block_cols") cfg.net.block_cols = parse_int(key, value);
        else if (key == "overlap") cfg.net.overlap_ratio = parse_double(key, value);
        else if (key == "patch_budget") cfg.net.train_patch_budget = parse_int(key, value);
        else if (key == "seed") cfg.net.seed = parse_u64(key, value);
        else if (key == "remove_patch_mean") cfg.net.remove_patch_mean = parse_bool(key, value);
        else if (key == "share_stage_filters")
            cfg.net.share_stage_filters = parse_bool(key, value);
        else if (key == "lambda") cfg.lambda = parse_double(key, value);
        else if (key == "threads") cfg.threads = parse_int(key, value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "report_text") cfg.report_text = parse_bool(key, value);
        else if (key == "report_kv") cfg.report_kv = parse_bool(key, value);
        else if (key == "data.name") cfg.data.name = value;
        else if (key == "data.source") {
            if (value == "idx_pair") cfg.data.source = DatasetManifest::Source::IdxPair;
            else if (value == "image_dir") cfg.data.source = DatasetManifest::Source::ImageDir;
            else throw ConfigError("data.source: expected idx_pair or image_dir");
        }
        else if (key == "data.images") cfg.data.images_path = value;
        else if (key == "data.labels") cfg.data.labels_path = value;
        else if (key == "data.dir") cfg.data.root_dir = value;
        else if (key == "data.classes") cfg.data.class_count = parse_int(key, value);
        else if (key == "data.rows") cfg.data.rows = parse_int(key, value);
        else if (key == "data.cols") cfg.data.cols = parse_int(key, value);
        else throw ConfigError("unknown config key: " + key);
    }

    if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    cfg.net.validate();
    return cfg;
}

RunConfig parse_run_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_run_config_text(buf.str());
    } catch (const ConfigError &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace kpcanet
