#include "dh/pipeline/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "dh/core/error.hpp"
#include "dh/core/fsutil.hpp"

namespace dh::pipeline {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& known) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

}  // namespace

PipelineConfig config_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON");
    PipelineConfig cfg;
    require_keys(j, "config",
                 {"stages", "workers", "seed", "out", "harvest", "fetch", "renderer", "detect",
                  "colors", "quality", "filter", "shard_size"});

    if (j.contains("stages")) {
        require_keys(j["stages"], "stages", {"harvest", "fetch", "annotate", "quality", "emit"});
        auto& s = j["stages"];
        cfg.stages.harvest = s.value("harvest", true);
        cfg.stages.fetch = s.value("fetch", true);
        cfg.stages.annotate = s.value("annotate", true);
        cfg.stages.quality = s.value("quality", true);
        cfg.stages.emit = s.value("emit", true);
    }
    cfg.workers = j.value("workers", std::size_t(4));
    cfg.seed = j.value("seed", std::uint64_t(0));
    cfg.output_dir = j.value("out", std::string("out"));
    cfg.shard_size = j.value("shard_size", std::size_t(1000));
    if (cfg.shard_size == 0) throw ConfigError("shard_size must be positive");

    if (j.contains("harvest")) {
        require_keys(j["harvest"], "harvest", {"manifest", "snapshot"});
        cfg.manifest = j["harvest"].value("manifest", std::string());
        cfg.snapshot_id = j["harvest"].value("snapshot", std::string("local"));
    }
    if (j.contains("fetch")) {
        require_keys(j["fetch"], "fetch",
                     {"urls", "max_redirects", "max_retries", "timeout_s", "max_bytes",
                      "accepted_content_types", "user_agent", "per_host_delay_ms"});
        auto& f = j["fetch"];
        cfg.urls_file = f.value("urls", std::string());
        cfg.fetch_policy.max_redirects = f.value("max_redirects", cfg.fetch_policy.max_redirects);
        cfg.fetch_policy.max_retries = f.value("max_retries", cfg.fetch_policy.max_retries);
        cfg.fetch_policy.timeout_seconds = f.value("timeout_s", cfg.fetch_policy.timeout_seconds);
        cfg.fetch_policy.max_bytes = f.value("max_bytes", cfg.fetch_policy.max_bytes);
        if (f.contains("accepted_content_types"))
            cfg.fetch_policy.accepted_content_types =
                f["accepted_content_types"].get<std::vector<std::string>>();
        if (cfg.fetch_policy.accepted_content_types.empty())
            throw ConfigError("accepted_content_types must not be empty");
        cfg.fetch_policy.user_agent = f.value("user_agent", cfg.fetch_policy.user_agent);
        cfg.fetch_policy.per_host_delay_ms =
            f.value("per_host_delay_ms", cfg.fetch_policy.per_host_delay_ms);
        if (cfg.fetch_policy.max_bytes == 0) throw ConfigError("max_bytes must be positive");
    }
    if (j.contains("renderer")) {
        require_keys(j["renderer"], "renderer",
                     {"kind", "convert_command", "raster_command", "dpi", "max_pages",
                      "timeout_s"});
        auto& r = j["renderer"];
        cfg.renderer_kind = r.value("kind", std::string("mock"));
        if (cfg.renderer_kind != "mock" && cfg.renderer_kind != "external")
            throw ConfigError("renderer.kind must be mock or external");
        cfg.renderer_commands.convert_command =
            r.value("convert_command", cfg.renderer_commands.convert_command);
        cfg.renderer_commands.raster_command =
            r.value("raster_command", cfg.renderer_commands.raster_command);
        cfg.render.dpi = r.value("dpi", cfg.render.dpi);
        cfg.render.max_pages = r.value("max_pages", cfg.render.max_pages);
        cfg.render.timeout_seconds = r.value("timeout_s", cfg.render.timeout_seconds);
        if (cfg.render.dpi < 24 || cfg.render.dpi > 600)
            throw ConfigError("renderer.dpi out of range");
    }
    if (j.contains("detect")) {
        require_keys(j["detect"], "detect", {"tolerance", "min_area", "merge_gap"});
        auto& d = j["detect"];
        cfg.detect.tolerance = d.value("tolerance", cfg.detect.tolerance);
        cfg.detect.min_area = d.value("min_area", cfg.detect.min_area);
        cfg.detect.merge_gap = d.value("merge_gap", cfg.detect.merge_gap);
    }
    if (j.contains("colors")) {
        if (!j["colors"].is_object()) throw ConfigError("colors must map category to RRGGBB");
        for (const auto& [name, value] : j["colors"].items()) {
            auto cat = docx::category_from_name(name);
            if (!cat) throw ConfigError("unknown category '" + name + "' in colors");
            std::string hex = value.get<std::string>();
            if (hex.size() != 6) throw ConfigError("color for " + name + " must be RRGGBB");
            auto nib = [&](char c) -> int {
                if (c >= '0' && c <= '9') return c - '0';
                if (c >= 'a' && c <= 'f') return c - 'a' + 10;
                if (c >= 'A' && c <= 'F') return c - 'A' + 10;
                throw ConfigError("bad hex digit in color for " + name);
            };
            cfg.colors.set_color(*cat, Rgb{std::uint8_t(nib(hex[0]) * 16 + nib(hex[1])),
                                           std::uint8_t(nib(hex[2]) * 16 + nib(hex[3])),
                                           std::uint8_t(nib(hex[4]) * 16 + nib(hex[5]))});
        }
        if (!cfg.colors.valid())
            throw ConfigError("color overrides break the minimum palette separation");
    }
    if (j.contains("quality")) {
        require_keys(j["quality"], "quality",
                     {"kn_order", "kn_model", "profiles_dir", "weight_by"});
        auto& q = j["quality"];
        cfg.kn_order = q.value("kn_order", cfg.kn_order);
        if (cfg.kn_order < 1 || cfg.kn_order > 8) throw ConfigError("kn_order out of range");
        cfg.kn_model_path = q.value("kn_model", std::string());
        cfg.profiles_dir = q.value("profiles_dir", std::string());
        std::string weight_by = q.value("weight_by", std::string("entities"));
        if (weight_by == "entities")
            cfg.reliability_weighting = quality::ReliabilityWeighting::Entities;
        else if (weight_by == "characters")
            cfg.reliability_weighting = quality::ReliabilityWeighting::Characters;
        else
            throw ConfigError("weight_by must be entities or characters");
    }
    if (j.contains("filter")) {
        require_keys(j["filter"], "filter",
                     {"languages", "min_confidence", "min_reliability", "min_perplexity",
                      "max_perplexity", "min_entities"});
        auto& f = j["filter"];
        if (f.contains("languages"))
            cfg.filter.languages = f["languages"].get<std::vector<std::string>>();
        if (f.contains("min_confidence"))
            cfg.filter.min_confidence = f["min_confidence"].get<double>();
        if (f.contains("min_reliability"))
            cfg.filter.min_reliability = f["min_reliability"].get<double>();
        if (f.contains("min_perplexity"))
            cfg.filter.min_perplexity = f["min_perplexity"].get<double>();
        if (f.contains("max_perplexity"))
            cfg.filter.max_perplexity = f["max_perplexity"].get<double>();
        if (f.contains("min_entities")) {
            for (const auto& [name, v] : f["min_entities"].items()) {
                if (!docx::category_from_name(name))
                    throw ConfigError("unknown category '" + name + "' in filter.min_entities");
                cfg.filter.min_entities[name] = v.get<std::uint64_t>();
            }
        }
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = fs::read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return config_from_json(text);
}

}  // namespace dh::pipeline
