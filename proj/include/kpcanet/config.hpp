#pragma once

#include <filesystem>
#include <string>

#include "kpcanet/core.hpp"
#include "kpcanet/ingest.hpp"

namespace kpcanet {

/// Everything a CLI run needs: network parameters, dataset manifest,
/// classifier regularization, output directory, and report flags.
struct RunConfig {
    NetConfig net;
    DatasetManifest data;
    double lambda = 1e-3;
    std::filesystem::path out_dir = ".";
    bool report_text = true;
    bool report_kv = true;
    int threads = 1;
};

/// Flat `key = value` format, one entry per line, `#` starts a comment.
/// Unknown keys are rejected. See the README for the full key list.
RunConfig parse_run_config_text(const std::string &text);
RunConfig parse_run_config(const std::filesystem::path &path);

}  // namespace kpcanet
