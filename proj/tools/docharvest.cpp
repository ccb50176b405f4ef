#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dh/core/fsutil.hpp"
#include "dh/fetch/fetcher.hpp"
#include "dh/pipeline/report.hpp"
#include "dh/pipeline/stages.hpp"

namespace {

namespace stdfs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitStageFailure = 2;
constexpr int kExitPartial = 3;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::size_t workers = 0;   // 0: keep config value
    std::uint64_t seed = 0;
    bool seed_set = false;
};

dh::pipeline::PipelineConfig make_config(const GlobalArgs& args) {
    dh::pipeline::PipelineConfig cfg;
    if (!args.config_path.empty()) cfg = dh::pipeline::load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.workers > 0) cfg.workers = args.workers;
    if (args.seed_set) cfg.seed = args.seed;
    return cfg;
}

int run_stages(const GlobalArgs& args, const std::optional<dh::pipeline::StageToggles>& toggles) {
    dh::pipeline::PipelineConfig cfg;
    try {
        cfg = make_config(args);
    } catch (const dh::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }
    if (toggles) cfg.stages = *toggles;  // absent: honor the config's toggles
    try {
        dh::pipeline::Pipeline pipeline(std::move(cfg));
        dh::pipeline::RunOutcome outcome = pipeline.run();
        for (const auto& name : outcome.stages_skipped)
            std::printf("stage %-8s skipped (done marker present)\n", name.c_str());
        for (const auto& name : outcome.stages_run)
            std::printf("stage %-8s completed\n", name.c_str());
        return outcome.partial ? kExitPartial : kExitOk;
    } catch (const dh::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "stage failure: %s\n", e.what());
        return kExitStageFailure;
    }
}

int run_verify(const GlobalArgs& args, const std::string& journal_path) {
    dh::pipeline::PipelineConfig cfg;
    try {
        cfg = make_config(args);
    } catch (const dh::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }
    try {
        auto transport = dh::fetch::make_httplib_transport();
        std::size_t unchanged = 0, changed = 0, unavailable = 0;
        for (const auto& line : dh::fs::read_lines(journal_path)) {
            if (line.empty()) continue;
            auto outcome = dh::fetch::outcome_from_jsonl(line);
            if (!outcome || outcome->status != dh::fetch::FetchStatus::Stored ||
                !outcome->byte_hash)
                continue;
            auto verdict = dh::fetch::verify_unchanged(outcome->url, *outcome->byte_hash,
                                                       cfg.fetch_policy, *transport);
            switch (verdict) {
                case dh::fetch::VerifyResult::Unchanged: ++unchanged; break;
                case dh::fetch::VerifyResult::Changed:
                    ++changed;
                    std::printf("CHANGED %s\n", outcome->url.c_str());
                    break;
                case dh::fetch::VerifyResult::Unavailable: ++unavailable; break;
            }
        }
        std::printf("verify: %zu unchanged, %zu changed, %zu unavailable\n", unchanged, changed,
                    unavailable);
        return changed > 0 ? kExitPartial : kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "stage failure: %s\n", e.what());
        return kExitStageFailure;
    }
}

int run_stats(const GlobalArgs& args) {
    try {
        dh::pipeline::PipelineConfig cfg = make_config(args);
        stdfs::path out(cfg.output_dir);
        std::vector<dh::quality::DocMeta> metas;
        stdfs::path meta_dir = out / "meta";
        if (stdfs::exists(meta_dir))
            for (const auto& name : dh::fs::list_files(meta_dir))
                if (name.ends_with(".json"))
                    metas.push_back(
                        dh::quality::meta_from_json(dh::fs::read_text_file(meta_dir / name)));
        auto stats = dh::pipeline::build_stats(metas, out / "fetch_journal.jsonl");
        dh::pipeline::write_stats_csvs(stats, out / "stats");
        std::printf("stats written to %s\n", (out / "stats").string().c_str());
        return kExitOk;
    } catch (const dh::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "stage failure: %s\n", e.what());
        return kExitStageFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Word-document harvesting and layout-annotation pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalArgs args;
    app.add_option("--config", args.config_path, "pipeline config JSON");
    app.add_option("--out", args.out_dir, "output directory (overrides config)");
    app.add_option("--workers", args.workers, "worker count (overrides config)");
    auto* seed_opt = app.add_option("--seed", args.seed, "random seed (overrides config)");

    // Per-subcommand extras.
    std::string manifest, snapshot, urls_file, policy_path, journal_path, ledger_dir;

    auto* harvest = app.add_subcommand("harvest", "extract Word URLs from WAT files");
    harvest->add_option("--manifest", manifest, "file listing .wat.gz paths");
    harvest->add_option("--snapshot", snapshot, "snapshot id, e.g. 2022-49");
    harvest->add_option("--ledger", ledger_dir, "output root holding urls/ and the ledger");

    auto* fetch_cmd = app.add_subcommand("fetch", "download candidate documents");
    fetch_cmd->add_option("--urls", urls_file, "URL list file");
    fetch_cmd->add_option("--policy", policy_path, "config JSON holding the fetch policy");

    auto* annotate = app.add_subcommand("annotate", "colorize, render and detect boxes");
    auto* quality = app.add_subcommand("quality", "compute quality metadata");
    auto* emit = app.add_subcommand("emit", "filter and write dataset shards");
    auto* stats = app.add_subcommand("stats", "rebuild the statistics reports");
    auto* run = app.add_subcommand("run", "run every enabled stage");
    auto* verify = app.add_subcommand("verify", "refetch stored URLs and compare hashes");
    verify->add_option("--journal", journal_path, "fetch journal")->required();

    CLI11_PARSE(app, argc, argv);
    args.seed_set = seed_opt->count() > 0;

    dh::pipeline::StageToggles toggles{false, false, false, false, false};
    if (harvest->parsed()) {
        toggles.harvest = true;
        if (!ledger_dir.empty()) args.out_dir = ledger_dir;
        int rc = kExitOk;
        try {
            auto cfg = make_config(args);
            if (!manifest.empty()) cfg.manifest = manifest;
            if (!snapshot.empty()) cfg.snapshot_id = snapshot;
            cfg.stages = toggles;
            dh::pipeline::Pipeline pipeline(std::move(cfg));
            pipeline.run();
            std::printf("stage harvest  completed\n");
        } catch (const dh::ConfigError& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            rc = kExitConfigError;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "stage failure: %s\n", e.what());
            rc = kExitStageFailure;
        }
        return rc;
    }
    if (fetch_cmd->parsed()) {
        toggles.fetch = true;
        if (!policy_path.empty()) args.config_path = policy_path;
        int rc = kExitOk;
        try {
            auto cfg = make_config(args);
            if (!urls_file.empty()) cfg.urls_file = urls_file;
            cfg.stages = toggles;
            dh::pipeline::Pipeline pipeline(std::move(cfg));
            auto outcome = pipeline.run();
            std::printf("stage fetch    completed\n");
            rc = outcome.partial ? kExitPartial : kExitOk;
        } catch (const dh::ConfigError& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            rc = kExitConfigError;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "stage failure: %s\n", e.what());
            rc = kExitStageFailure;
        }
        return rc;
    }
    if (annotate->parsed()) {
        toggles.annotate = true;
        return run_stages(args, toggles);
    }
    if (quality->parsed()) {
        toggles.quality = true;
        return run_stages(args, toggles);
    }
    if (emit->parsed()) {
        toggles.emit = true;
        return run_stages(args, toggles);
    }
    if (stats->parsed()) return run_stats(args);
    if (run->parsed()) return run_stages(args, std::nullopt);
    if (verify->parsed()) return run_verify(args, journal_path);
    return kExitConfigError;
}
