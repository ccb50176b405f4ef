// Generates a synthetic document corpus, writes a WAT manifest pointing at a
// loopback HTTP server, and serves the documents until interrupted. Lets the
// full pipeline run end to end with no outside network.
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "corpus.hpp"
#include "dh/core/fsutil.hpp"
#include "fixture_server.hpp"
#include "fixtures.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serve a synthetic fixture corpus for offline pipeline runs"};
    std::string dir = "fixtures";
    std::size_t count = 20;
    std::uint64_t seed = 7;
    bool serve = true;
    app.add_option("--dir", dir, "directory for manifest + wat file");
    app.add_option("--count", count, "number of documents");
    app.add_option("--seed", seed, "corpus seed");
    app.add_flag("!--no-serve", serve, "only write files, do not serve");
    CLI11_PARSE(app, argc, argv);

    namespace stdfs = std::filesystem;
    stdfs::create_directories(dir);

    auto corpus = dh::test::make_fixture_corpus(count, seed);
    dh::test::FixtureServer server;
    dh::test::WatRecordSpec record;
    record.target_uri = server.url_for("/");
    for (const auto& doc : corpus) {
        server.serve_bytes("/files/" + doc.name, doc.bytes);
        record.links.push_back(server.url_for("/files/" + doc.name));
        dh::fs::write_file(stdfs::path(dir) / "docs" / doc.name, doc.bytes);
    }
    dh::fs::write_file(stdfs::path(dir) / "fixture.wat.gz", dh::test::build_wat({record}));
    dh::fs::write_file(stdfs::path(dir) / "manifest.txt",
                       (stdfs::path(dir) / "fixture.wat.gz").string() + "\n");

    std::printf("wrote %zu documents, %s/manifest.txt\n", corpus.size(), dir.c_str());
    std::printf("serving on http://127.0.0.1:%d/files/<name>\n", server.port());
    if (!serve) return 0;
    std::printf("press Ctrl-C to stop\n");
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    return 0;
}
