#pragma once

#include <filesystem>
#include <map>
#include <memory>

#include "dh/fetch/transport.hpp"
#include "dh/pipeline/config.hpp"

namespace dh::pipeline {

class StagePrereqMissing : public Error {
public:
    using Error::Error;
};

struct RunOutcome {
    std::vector<std::string> stages_run;
    std::vector<std::string> stages_skipped;  // done markers honored
    bool partial = false;                     // some documents failed but the run completed
};

// Stage sequencing with journal-driven resumability: each completed stage
// leaves <out>/_<stage>.done.json; a present marker skips the stage unless an
// earlier stage re-ran.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);

    // Injection point for tests; defaults to the real HTTP transport.
    void set_transport(fetch::HttpTransport* transport) { transport_ = transport; }

    RunOutcome run();

    void run_harvest();
    void run_fetch();
    void run_annotate();
    void run_quality();
    void run_emit();

    const std::filesystem::path& output_dir() const { return out_; }
    static std::map<std::string, std::uint64_t> read_marker(const std::filesystem::path& file);

private:
    bool stage_done(const std::string& name) const;
    void write_marker(const std::string& name, const std::map<std::string, std::uint64_t>& counts);
    fetch::HttpTransport& transport();

    PipelineConfig cfg_;
    std::filesystem::path out_;
    fetch::HttpTransport* transport_ = nullptr;
    std::unique_ptr<fetch::HttpTransport> owned_transport_;
    bool upstream_reran_ = false;
    bool any_failures_ = false;
};

}  // namespace dh::pipeline
