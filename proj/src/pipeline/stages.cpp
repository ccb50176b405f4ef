#include "dh/pipeline/stages.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dh/annotate/mock_renderer.hpp"
#include "dh/core/fsutil.hpp"
#include "dh/core/png.hpp"
#include "dh/core/thread_pool.hpp"
#include "dh/fetch/fetcher.hpp"
#include "dh/harvest/harvest.hpp"
#include "dh/pipeline/dataset.hpp"
#include "dh/pipeline/report.hpp"
#include "dh/quality/kneser_ney.hpp"

namespace dh::pipeline {

namespace stdfs = std::filesystem;

Pipeline::Pipeline(PipelineConfig config) : cfg_(std::move(config)), out_(cfg_.output_dir) {}

fetch::HttpTransport& Pipeline::transport() {
    if (transport_) return *transport_;
    if (!owned_transport_) owned_transport_ = fetch::make_httplib_transport();
    return *owned_transport_;
}

bool Pipeline::stage_done(const std::string& name) const {
    return stdfs::exists(out_ / ("_" + name + ".done.json"));
}

void Pipeline::write_marker(const std::string& name,
                            const std::map<std::string, std::uint64_t>& counts) {
    nlohmann::json j{{"stage", name}, {"counts", counts}};
    fs::write_file(out_ / ("_" + name + ".done.json"), j.dump(2) + "\n");
}

std::map<std::string, std::uint64_t> Pipeline::read_marker(const stdfs::path& file) {
    std::map<std::string, std::uint64_t> counts;
    auto bytes = fs::try_read_file(file);
    if (!bytes) return counts;
    auto j = nlohmann::json::parse(std::string(bytes->begin(), bytes->end()), nullptr, false);
    if (j.is_discarded() || !j.contains("counts")) return counts;
    for (const auto& [k, v] : j["counts"].items())
        if (v.is_number()) counts[k] = v.get<std::uint64_t>();
    return counts;
}

void Pipeline::run_harvest() {
    harvest::HarvestOptions options;
    options.manifest = cfg_.manifest;
    options.snapshot_id = cfg_.snapshot_id;
    options.output_dir = out_;
    options.workers = cfg_.workers;
    transport();  // materialize before the worker pool shares it
    // Manifest entries may be local paths or http(s) URLs to .wat.gz files.
    options.loader = [this](const std::string& path) -> Bytes {
        if (path.rfind("http://", 0) == 0 || path.rfind("https://", 0) == 0) {
            fetch::FetchPolicy wat_policy = cfg_.fetch_policy;
            wat_policy.max_bytes = std::uint64_t(4) << 30;  // whole-file WAT downloads
            auto result = transport().get(path, wat_policy);
            if (!result.ok() || result.response.status != 200)
                throw Error("wat download failed: " + path + " (" + result.detail + ")");
            return std::move(result.response.body);
        }
        return fs::read_file(path);
    };
    if (cfg_.manifest.empty() || !stdfs::exists(options.manifest))
        throw StagePrereqMissing("harvest manifest not found: " + cfg_.manifest);
    harvest::HarvestStats stats = harvest::run_harvest(options);
    write_marker("harvest", {{"wat_files", stats.wat_files},
                             {"wat_files_failed", stats.wat_files_failed},
                             {"raw_urls", stats.raw_urls},
                             {"snapshot_unique", stats.snapshot_unique},
                             {"global_unique", stats.global_unique},
                             {"parse_errors", stats.records_malformed}});
}

void Pipeline::run_fetch() {
    fetch::FetchRunOptions options;
    options.urls_file = cfg_.urls_file.empty()
                            ? out_ / "urls" / (cfg_.snapshot_id + ".txt")
                            : stdfs::path(cfg_.urls_file);
    if (!stdfs::exists(options.urls_file))
        throw StagePrereqMissing("urls file not found: " + options.urls_file.string());
    options.output_dir = out_;
    options.policy = cfg_.fetch_policy;
    options.workers = cfg_.workers;
    options.transport = &transport();
    fetch::FetchRunStats stats = fetch::run_fetch(options);
    std::map<std::string, std::uint64_t> counts{{"requests", stats.requests},
                                                {"stored", stats.stored},
                                                {"failed", stats.failed}};
    for (const auto& [kind, n] : stats.rejected_by_kind) counts["rejected_" + kind] = n;
    if (stats.failed > 0) any_failures_ = true;
    write_marker("fetch", counts);
}

namespace {

std::vector<stdfs::path> stored_documents(const stdfs::path& docs_dir) {
    std::vector<stdfs::path> out;
    if (!stdfs::exists(docs_dir)) return out;
    for (const auto& entry : stdfs::recursive_directory_iterator(docs_dir))
        if (entry.is_regular_file()) out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

void Pipeline::run_annotate() {
    stdfs::path docs_dir = out_ / "docs";
    std::vector<stdfs::path> docs = stored_documents(docs_dir);
    if (docs.empty() && !stage_done("fetch"))
        throw StagePrereqMissing("no stored documents under " + docs_dir.string());

    annotate::AnnotateParams params;
    params.detect = cfg_.detect;
    params.render = cfg_.render;
    params.colors = cfg_.colors;

    std::unique_ptr<annotate::Renderer> renderer;
    if (cfg_.renderer_kind == "external")
        renderer = annotate::make_external_renderer(cfg_.renderer_commands);
    else
        renderer = std::make_unique<annotate::MockRenderer>();

    stdfs::create_directories(out_ / "model");
    stdfs::create_directories(out_ / "ann");
    stdfs::create_directories(out_ / "pages");

    struct Row {
        std::string hash;
        std::string status;
        std::string reason;
        int pages = 0;
        std::size_t colorize_failures = 0;
    };
    std::vector<Row> rows(docs.size());
    parallel_for_each(docs.size(), cfg_.workers, [&](std::size_t i) {
        const stdfs::path& path = docs[i];
        Row row;
        row.hash = path.stem().string();
        if (path.extension() == ".doc") {
            // Legacy binary format: screened and counted upstream, not parsed.
            row.status = "Skipped";
            row.reason = "LegacyDoc";
            rows[i] = std::move(row);
            return;
        }
        try {
            Bytes bytes = fs::read_file(path);
            annotate::DocAnnotation result = annotate_document(bytes, *renderer, params);
            result.model.source_hash = row.hash;
            row.status = std::string(annotate::doc_status_name(result.status));
            row.reason = result.reason;
            row.pages = int(result.pages.size());
            row.colorize_failures = result.colorize_failures;
            if (result.status == annotate::DocStatus::Annotated) {
                fs::write_file(out_ / "model" / (row.hash + ".json"),
                               docx::model_to_json(result.model));
                fs::write_file(out_ / "ann" / (row.hash + ".json"),
                               annotate::pages_to_json(result.pages));
                for (std::size_t p = 0; p < result.page_images.size(); ++p) {
                    fs::write_file(
                        out_ / "pages" / (row.hash + "_" + std::to_string(p) + ".png"),
                        encode_png(result.page_images[p]));
                }
            }
        } catch (const std::exception& e) {
            row.status = "Failed";
            row.reason = std::string("Internal: ") + e.what();
        }
        rows[i] = std::move(row);
    });

    std::map<std::string, std::uint64_t> counts{{"inputs", docs.size()}};
    std::ofstream journal(out_ / "annotate_journal.jsonl", std::ios::trunc);
    for (const auto& row : rows) {
        nlohmann::json j{{"hash", row.hash},
                         {"status", row.status},
                         {"reason", row.reason},
                         {"pages", row.pages},
                         {"colorize_failures", row.colorize_failures}};
        journal << j.dump() << "\n";
        if (row.status == "Annotated") {
            ++counts["annotated"];
            counts["pages"] += std::uint64_t(row.pages);
        } else if (row.status == "Skipped") {
            ++counts["skipped_legacy"];
        } else if (row.status == "Rejected") {
            ++counts["rejected_" + row.reason];
        } else {
            std::string key = row.reason.substr(0, row.reason.find(':'));
            ++counts["failed_" + (key.empty() ? "Internal" : key)];
            any_failures_ = true;
        }
    }
    write_marker("annotate", counts);
}

void Pipeline::run_quality() {
    stdfs::path model_dir = out_ / "model";
    if (!stdfs::exists(model_dir))
        throw StagePrereqMissing("no models under " + model_dir.string());
    std::vector<std::string> hashes;
    for (const auto& name : fs::list_files(model_dir))
        if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
            hashes.push_back(name.substr(0, name.size() - 5));

    quality::LanguageClassifier classifier =
        cfg_.profiles_dir.empty()
            ? quality::LanguageClassifier::with_builtin_profiles()
            : quality::LanguageClassifier::from_directory(cfg_.profiles_dir);

    struct DocData {
        docx::DocumentModel model;
        std::vector<annotate::PageAnnotation> pages;
        std::string text;
    };
    std::vector<DocData> docs(hashes.size());
    std::vector<std::string> worker_errors(hashes.size());
    parallel_for_each(hashes.size(), cfg_.workers, [&](std::size_t i) {
        try {
            DocData d;
            d.model = docx::model_from_json(
                fs::read_text_file(model_dir / (hashes[i] + ".json")));
            stdfs::path ann_path = out_ / "ann" / (hashes[i] + ".json");
            if (stdfs::exists(ann_path))
                d.pages = annotate::pages_from_json(fs::read_text_file(ann_path));
            d.text = docx::extract_doc_text(d.model);
            docs[i] = std::move(d);
        } catch (const std::exception& e) {
            worker_errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < hashes.size(); ++i)
        if (!worker_errors[i].empty())
            throw Error("quality stage: " + hashes[i] + ": " + worker_errors[i]);

    // Perplexity model: external when configured, otherwise trained on this
    // run's own corpus (hash order keeps it deterministic).
    std::optional<quality::KneserNeyModel> kn;
    if (!cfg_.kn_model_path.empty()) {
        kn = quality::KneserNeyModel::parse(fs::read_text_file(cfg_.kn_model_path));
    } else {
        std::vector<std::string> corpus;
        for (const auto& d : docs) {
            auto tokens = quality::tokenize_for_lm(d.text);
            corpus.insert(corpus.end(), tokens.begin(), tokens.end());
        }
        if (corpus.size() >= std::size_t(cfg_.kn_order)) {
            kn = quality::KneserNeyModel::train(corpus, cfg_.kn_order);
            stdfs::create_directories(out_ / "quality");
            fs::write_file(out_ / "quality" / "kn.model", kn->serialize());
        }
    }

    stdfs::create_directories(out_ / "meta");
    std::vector<quality::DocMeta> metas(hashes.size());
    parallel_for_each(hashes.size(), cfg_.workers, [&](std::size_t i) {
        try {
            const DocData& d = docs[i];
            quality::DocMeta meta;
            meta.hash = hashes[i];
            meta.page_count = d.model.page_count;
            meta.stats = quality::text_stats(d.text);
            meta.language = classifier.identify(d.text);
            for (const auto& page : d.pages)
                meta.page_languages.push_back(classifier.identify(page.page_text));
            if (kn) {
                auto tokens = quality::tokenize_for_lm(d.text);
                if (!tokens.empty()) meta.perplexity = kn->perplexity(tokens);
            }
            auto input = quality::reliability_input_of(d.model);
            meta.reliability = quality::reliability_score(input, cfg_.reliability_weighting);
            for (const auto& page : d.pages)
                for (const auto& box : page.boxes)
                    ++meta.entity_counts[std::string(docx::category_name(box.category))];
            fs::write_file(out_ / "meta" / (hashes[i] + ".json"), quality::meta_to_json(meta));
            metas[i] = std::move(meta);
        } catch (const std::exception& e) {
            worker_errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < hashes.size(); ++i)
        if (!worker_errors[i].empty())
            throw Error("quality stage: " + hashes[i] + ": " + worker_errors[i]);

    std::map<std::string, std::uint64_t> counts{{"inputs", hashes.size()},
                                                {"processed", metas.size()}};
    write_marker("quality", counts);
}

void Pipeline::run_emit() {
    stdfs::path meta_dir = out_ / "meta";
    if (!stdfs::exists(meta_dir))
        throw StagePrereqMissing("no metadata under " + meta_dir.string());
    std::vector<quality::DocMeta> metas;
    for (const auto& name : fs::list_files(meta_dir))
        if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
            metas.push_back(quality::meta_from_json(fs::read_text_file(meta_dir / name)));

    std::map<std::string, std::vector<annotate::PageAnnotation>> anns;
    for (const auto& meta : metas) {
        stdfs::path ann_path = out_ / "ann" / (meta.hash + ".json");
        if (stdfs::exists(ann_path))
            anns[meta.hash] = annotate::pages_from_json(fs::read_text_file(ann_path));
    }

    EmitResult result =
        emit_dataset(out_, metas, anns, cfg_.filter, cfg_.shard_size, cfg_.seed);

    StatsBundle stats = build_stats(metas, out_ / "fetch_journal.jsonl");
    write_stats_csvs(stats, out_ / "stats");

    // Run report: stage counts straight from the done markers.
    nlohmann::json report;
    for (const char* stage : {"harvest", "fetch", "annotate", "quality"}) {
        auto counts = read_marker(out_ / ("_" + std::string(stage) + ".done.json"));
        if (!counts.empty()) report["stages"][stage] = counts;
    }
    report["emit"] = {{"accepted_docs", result.accepted_docs},
                      {"pages", result.pages},
                      {"shards", result.shards},
                      {"rejected_by_predicate", result.rejected_by_predicate}};
    fs::write_file(out_ / "run_report.json", report.dump(2) + "\n");

    std::map<std::string, std::uint64_t> counts{{"accepted_docs", result.accepted_docs},
                                                {"pages", result.pages},
                                                {"shards", result.shards}};
    for (const auto& [k, v] : result.rejected_by_predicate) counts["rejected_" + k] = v;
    write_marker("emit", counts);
}

RunOutcome Pipeline::run() {
    RunOutcome outcome;
    stdfs::create_directories(out_);
    struct Stage {
        const char* name;
        bool enabled;
        void (Pipeline::*fn)();
    };
    const Stage stages[] = {
        {"harvest", cfg_.stages.harvest, &Pipeline::run_harvest},
        {"fetch", cfg_.stages.fetch, &Pipeline::run_fetch},
        {"annotate", cfg_.stages.annotate, &Pipeline::run_annotate},
        {"quality", cfg_.stages.quality, &Pipeline::run_quality},
        {"emit", cfg_.stages.emit, &Pipeline::run_emit},
    };
    for (const auto& stage : stages) {
        if (!stage.enabled) continue;
        if (stage_done(stage.name) && !upstream_reran_) {
            outcome.stages_skipped.push_back(stage.name);
            continue;
        }
        (this->*stage.fn)();
        upstream_reran_ = true;
        outcome.stages_run.push_back(stage.name);
    }
    outcome.partial = any_failures_;
    return outcome;
}

}  // namespace dh::pipeline
