#pragma once

#include <filesystem>

#include "corpus.hpp"
#include "dh/core/fsutil.hpp"
#include "dh/pipeline/stages.hpp"
#include "fixture_server.hpp"
#include "fixtures.hpp"

namespace dh::test {

// Wires a synthetic corpus behind the fixture HTTP server and builds a WAT
// manifest pointing at it, so the whole pipeline can run offline.
struct EndToEndFixture {
    explicit EndToEndFixture(std::size_t docs, std::uint64_t corpus_seed = 7)
        : corpus(make_fixture_corpus(docs, corpus_seed)) {
        for (const auto& doc : corpus) server.serve_bytes("/files/" + doc.name, doc.bytes);
    }

    // Creates <dir>/manifest.txt plus the backing wat file.
    std::filesystem::path write_manifest(const std::filesystem::path& dir) {
        std::filesystem::create_directories(dir);
        WatRecordSpec record;
        record.target_uri = server.url_for("/");
        for (const auto& doc : corpus) record.links.push_back(server.url_for("/files/" + doc.name));
        dh::fs::write_file(dir / "fixture.wat.gz", build_wat({record}));
        dh::fs::write_file(dir / "manifest.txt",
                           std::string((dir / "fixture.wat.gz").string() + "\n"));
        return dir / "manifest.txt";
    }

    dh::pipeline::PipelineConfig config(const std::filesystem::path& out,
                                        const std::filesystem::path& manifest,
                                        std::uint64_t seed = 1) {
        dh::pipeline::PipelineConfig cfg;
        cfg.output_dir = out.string();
        cfg.manifest = manifest.string();
        cfg.snapshot_id = "fixture-snap";
        cfg.workers = 2;
        cfg.seed = seed;
        cfg.fetch_policy.timeout_seconds = 5;
        cfg.renderer_kind = "mock";
        cfg.shard_size = 4;
        cfg.kn_order = 3;
        return cfg;
    }

    FixtureServer server;
    std::vector<CorpusDoc> corpus;
};

}  // namespace dh::test
