#include <doctest.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "dh/core/png.hpp"
#include "dh/pipeline/config.hpp"
#include "dh/pipeline/dataset.hpp"
#include "dh/pipeline/report.hpp"
#include "e2e.hpp"

using namespace dh;
using namespace dh::pipeline;

namespace stdfs = std::filesystem;

TEST_CASE("config: defaults, overrides, and unknown keys") {
    auto cfg = config_from_json("{}");
    CHECK(cfg.workers == 4);
    CHECK(cfg.fetch_policy.max_redirects == 5);
    CHECK(cfg.fetch_policy.max_retries == 2);
    CHECK(cfg.fetch_policy.timeout_seconds == 30);
    CHECK(cfg.fetch_policy.max_bytes == 10 * 1024 * 1024);
    CHECK(cfg.render.dpi == 150);
    CHECK(cfg.render.max_pages == 150);
    CHECK(cfg.detect.tolerance == 8);
    CHECK(cfg.detect.min_area == 16);
    CHECK(cfg.detect.merge_gap == 4);

    auto parsed = config_from_json(R"({"workers": 8, "fetch": {"max_bytes": 1024},
        "renderer": {"kind": "mock", "dpi": 96}, "filter": {"languages": ["en"]}})");
    CHECK(parsed.workers == 8);
    CHECK(parsed.fetch_policy.max_bytes == 1024);
    CHECK(parsed.render.dpi == 96);
    CHECK(parsed.filter.languages == std::vector<std::string>{"en"});

    CHECK_THROWS_AS((void)config_from_json(R"({"wrokers": 2})"), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(R"({"fetch": {"maxBytes": 1}})"), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(R"({"renderer": {"kind": "paint"}})"), ConfigError);
    CHECK_THROWS_AS((void)config_from_json("not json"), ConfigError);
}

TEST_CASE("pipeline end to end on a small fixture corpus") {
    test::EndToEndFixture fixture(6);
    stdfs::path dir = stdfs::temp_directory_path() / "dh-pipeline-e2e";
    stdfs::remove_all(dir);
    auto manifest = fixture.write_manifest(dir / "in");
    auto cfg = fixture.config(dir / "out", manifest);

    Pipeline pipeline(cfg);
    auto outcome = pipeline.run();
    CHECK(outcome.stages_run.size() == 5);
    CHECK(!outcome.partial);

    // Stage outputs exist.
    CHECK(stdfs::exists(dir / "out" / "urls" / "fixture-snap.txt"));
    CHECK(stdfs::exists(dir / "out" / "fetch_journal.jsonl"));
    CHECK(stdfs::exists(dir / "out" / "annotate_journal.jsonl"));
    CHECK(stdfs::exists(dir / "out" / "dataset" / "manifest.json"));
    CHECK(stdfs::exists(dir / "out" / "stats" / "entity_counts.csv"));
    CHECK(stdfs::exists(dir / "out" / "run_report.json"));

    // Counts reconcile: every fetched url has a journal line; annotated +
    // rejected + failed + skipped == fetch stored.
    auto fetch_counts = Pipeline::read_marker(dir / "out" / "_fetch.done.json");
    auto annotate_counts = Pipeline::read_marker(dir / "out" / "_annotate.done.json");
    CHECK(fetch_counts["requests"] == 6);
    CHECK(fetch_counts["stored"] == annotate_counts["inputs"]);
    std::uint64_t annotate_outcomes = 0;
    for (const auto& [key, value] : annotate_counts)
        if (key == "annotated" || key == "skipped_legacy" || key.rfind("rejected_", 0) == 0 ||
            key.rfind("failed_", 0) == 0)
            annotate_outcomes += value;
    CHECK(annotate_outcomes == annotate_counts["inputs"]);

    // Rerun with markers present: everything skips.
    Pipeline again(cfg);
    auto second = again.run();
    CHECK(second.stages_run.empty());
    CHECK(second.stages_skipped.size() == 5);

    stdfs::remove_all(dir);
}

TEST_CASE("pipeline stage prerequisites are checked") {
    stdfs::path dir = stdfs::temp_directory_path() / "dh-pipeline-prereq";
    stdfs::remove_all(dir);
    PipelineConfig cfg;
    cfg.output_dir = (dir / "out").string();
    cfg.stages = {false, false, false, true, false};  // quality without annotate
    Pipeline pipeline(cfg);
    CHECK_THROWS_AS(pipeline.run(), StagePrereqMissing);
    stdfs::remove_all(dir);
}

TEST_CASE("stats bundle and csv shapes") {
    std::vector<quality::DocMeta> metas(2);
    metas[0].hash = "a";
    metas[0].language = {"en", 0.9};
    metas[0].page_languages = {{"en", 0.9}, {"en", 0.8}};
    metas[0].perplexity = 100;
    metas[0].reliability = 0.96;
    metas[0].stats.word_count = 50;
    metas[0].entity_counts = {{"Table", 3}, {"Heading1", 2}, {"PlainText", 5},
                              {"TableCell", 12}};
    metas[1].hash = "b";
    metas[1].language = {"de", 0.8};
    metas[1].page_languages = {{"de", 0.8}};
    metas[1].perplexity = 200;
    metas[1].reliability = 0.4;
    metas[1].stats.word_count = 70;
    metas[1].entity_counts = {{"Heading2", 1}, {"PlainText", 4}};

    auto stats = build_stats(metas, "/nonexistent/journal.jsonl");
    CHECK(stats.entity_counts["Table"] == 3);
    CHECK(stats.pages_per_language["en"] == 2);
    CHECK(stats.pages_per_language["de"] == 1);
    CHECK(stats.lang_entities["en"]["heading"] == 2);
    CHECK(stats.lang_entities["en"]["table"] == 3);
    CHECK(stats.lang_entities["de"]["heading"] == 1);
    // Table structure is excluded from the language table.
    for (const auto& [col, _] : kLangEntityColumns) CHECK(col != "TableCell");

    stdfs::path dir = stdfs::temp_directory_path() / "dh-stats-test";
    stdfs::remove_all(dir);
    write_stats_csvs(stats, dir);

    // Frequencies sum to 1.
    auto lines = fs::read_lines(dir / "entity_counts.csv");
    REQUIRE(lines.size() == 31);  // header + 30 categories
    double freq_sum = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto last_comma = lines[i].rfind(',');
        freq_sum += std::stod(lines[i].substr(last_comma + 1));
    }
    CHECK(std::abs(freq_sum - 1.0) < 1e-9);

    auto lang_lines = fs::read_lines(dir / "lang_entities.csv");
    CHECK(lang_lines[0] ==
          "lang,total,heading,title,text,list,header,footer,toc,bibliography,quote,equation,"
          "figure,footnote,annotation,form tag,form field,table");
    stdfs::remove_all(dir);
}

TEST_CASE("perplexity cdf rows are cumulative per language") {
    std::vector<quality::DocMeta> metas(3);
    for (int i = 0; i < 3; ++i) {
        metas[std::size_t(i)].hash = std::to_string(i);
        metas[std::size_t(i)].language = {"en", 0.9};
        metas[std::size_t(i)].perplexity = 300.0 - 100.0 * i;  // out of order on purpose
        metas[std::size_t(i)].stats.word_count = 10;
    }
    auto stats = build_stats(metas, "/nonexistent");
    REQUIRE(stats.ppl_cdf.size() == 3);
    double last_threshold = 0;
    std::uint64_t last_words = 0;
    for (const auto& [lang, threshold, words] : stats.ppl_cdf) {
        CHECK(lang == "en");
        CHECK(threshold >= last_threshold);
        CHECK(words > last_words);
        last_threshold = threshold;
        last_words = words;
    }
    CHECK(std::get<2>(stats.ppl_cdf.back()) == 30);
}

TEST_CASE("entity frequencies match hand-counted fixture proportions") {
    // 3 tables, 2 headings, 5 text elements -> 0.3 / 0.2 / 0.5.
    std::vector<quality::DocMeta> metas(1);
    metas[0].hash = "x";
    metas[0].entity_counts = {{"Table", 3}, {"Heading1", 2}, {"PlainText", 5}};
    auto stats = build_stats(metas, "/nonexistent");
    stdfs::path dir = stdfs::temp_directory_path() / "dh-freq-test";
    stdfs::remove_all(dir);
    write_stats_csvs(stats, dir);
    std::map<std::string, double> freq;
    auto lines = fs::read_lines(dir / "entity_counts.csv");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto first = lines[i].find(',');
        auto last = lines[i].rfind(',');
        freq[lines[i].substr(0, first)] = std::stod(lines[i].substr(last + 1));
    }
    CHECK(freq["Table"] == doctest::Approx(0.3));
    CHECK(freq["Heading1"] == doctest::Approx(0.2));
    CHECK(freq["PlainText"] == doctest::Approx(0.5));
    stdfs::remove_all(dir);
}

namespace {

// Minimal emit inputs: n single-page docs with trivial annotations.
struct EmitFixture {
    std::vector<quality::DocMeta> metas;
    std::map<std::string, std::vector<annotate::PageAnnotation>> anns;
    stdfs::path out;

    explicit EmitFixture(int docs, const char* name) {
        out = stdfs::temp_directory_path() / name;
        stdfs::remove_all(out);
        stdfs::create_directories(out / "pages");
        for (int i = 0; i < docs; ++i) {
            quality::DocMeta meta;
            meta.hash = "doc" + std::to_string(i);
            meta.language = {i % 3 == 0 ? "xx" : "en", 0.9};
            meta.page_count = 1;
            meta.stats.word_count = 10;
            metas.push_back(meta);
            annotate::PageAnnotation page;
            page.page_index = 0;
            page.width = 10;
            page.height = 10;
            page.boxes.push_back(
                {docx::Category::PlainText, Rect{1, 1, 5, 5}, std::nullopt});
            anns[meta.hash] = {page};
            fs::write_file(out / "pages" / (meta.hash + "_0.png"),
                           encode_png(Image(10, 10)));
        }
    }
};

}  // namespace

TEST_CASE("emit_dataset shards by ceiling division and honors filters") {
    EmitFixture fixture(10, "dh-emit-test");
    auto result = emit_dataset(fixture.out, fixture.metas, fixture.anns, {}, 4, 3);
    CHECK(result.pages == 10);
    CHECK(result.shards == 3);  // 4 + 4 + 2
    auto manifest = nlohmann::json::parse(
        fs::read_text_file(fixture.out / "dataset" / "manifest.json"));
    REQUIRE(manifest["shards"].size() == 3);
    CHECK(manifest["shards"][0]["pages"] == 4);
    CHECK(manifest["shards"][2]["pages"] == 2);

    // Language filter: no "xx" page reaches any shard.
    quality::FilterSpec spec;
    spec.languages = {"en"};
    auto filtered = emit_dataset(fixture.out, fixture.metas, fixture.anns, spec, 4, 3);
    CHECK(filtered.rejected_by_predicate["language"] == 4);
    for (std::size_t s = 0; s < filtered.shards; ++s) {
        char shard[16];
        std::snprintf(shard, sizeof(shard), "shard_%04zu", s);
        for (const auto& line :
             fs::read_lines(fixture.out / "dataset" / shard / "meta.jsonl")) {
            auto row = nlohmann::json::parse(line);
            CHECK(row["language"] != "xx");
        }
    }
    stdfs::remove_all(fixture.out);
}

TEST_CASE("manifest hash changes exactly when shard bytes change") {
    EmitFixture fixture(4, "dh-manifest-test");
    emit_dataset(fixture.out, fixture.metas, fixture.anns, {}, 10, 5);
    auto manifest1 = fs::read_text_file(fixture.out / "dataset" / "manifest.json");
    emit_dataset(fixture.out, fixture.metas, fixture.anns, {}, 10, 5);
    CHECK(fs::read_text_file(fixture.out / "dataset" / "manifest.json") == manifest1);

    // Flip one byte of one page annotation: shard bytes change, hash changes.
    fixture.anns["doc2"][0].boxes[0].box.w += 1;
    emit_dataset(fixture.out, fixture.metas, fixture.anns, {}, 10, 5);
    CHECK(fs::read_text_file(fixture.out / "dataset" / "manifest.json") != manifest1);
    stdfs::remove_all(fixture.out);
}
