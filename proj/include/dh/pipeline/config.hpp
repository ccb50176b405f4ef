#pragma once

#include <cstdint>
#include <string>

#include "dh/annotate/annotator.hpp"
#include "dh/annotate/renderer.hpp"
#include "dh/fetch/outcome.hpp"
#include "dh/quality/filters.hpp"
#include "dh/quality/reliability.hpp"

namespace dh::pipeline {

struct StageToggles {
    bool harvest = true;
    bool fetch = true;
    bool annotate = true;
    bool quality = true;
    bool emit = true;
};

struct PipelineConfig {
    StageToggles stages;
    std::size_t workers = 4;
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    // harvest
    std::string manifest;
    std::string snapshot_id = "local";

    // fetch
    fetch::FetchPolicy fetch_policy;
    std::string urls_file;  // overrides urls/<snapshot>.txt when set

    // annotate
    std::string renderer_kind = "mock";  // mock | external
    annotate::ExternalRendererConfig renderer_commands;
    annotate::RenderOptions render;
    annotate::DetectParams detect;
    annotate::ColorMap colors;

    // quality
    int kn_order = 3;
    std::string kn_model_path;   // empty: train on the run's own corpus
    std::string profiles_dir;    // empty: built-in language profiles
    quality::ReliabilityWeighting reliability_weighting =
        quality::ReliabilityWeighting::Entities;

    // emit
    quality::FilterSpec filter;
    std::size_t shard_size = 1000;
};

// Strict parse: unknown keys anywhere are a ConfigError; absent keys take the
// documented defaults above.
PipelineConfig config_from_json(const std::string& text);
PipelineConfig load_config(const std::string& path);

}  // namespace dh::pipeline
