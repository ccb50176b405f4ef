#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <string>

#include "dh/fetch/content_check.hpp"
#include "dh/fetch/maldoc.hpp"
#include "dh/fetch/outcome.hpp"
#include "dh/fetch/transport.hpp"

namespace dh::fetch {

// Byte-hash authority: one stored document per distinct content hash.
// admit() is an atomic check-and-insert, safe across fetch workers.
class ContentLedger {
public:
    bool admit(const std::string& hex_hash);
    bool contains(const std::string& hex_hash) const;
    std::size_t size() const;

    void save(const std::filesystem::path& file) const;
    void load(const std::filesystem::path& file);  // merges file contents in

private:
    mutable std::mutex mu_;
    std::set<std::string> hashes_;
};

// One URL end to end: redirect chain, retries, size cap, content-type and
// magic checks, maldoc screen, hashing. Never throws past the outcome.
// When body_out is given and the outcome is Stored, it receives the bytes.
FetchOutcome fetch_document(const std::string& url, const FetchPolicy& policy,
                            HttpTransport& transport, Bytes* body_out = nullptr);

// Applies content dedup to a Stored outcome.
FetchOutcome dedup_by_hash(FetchOutcome outcome, ContentLedger& ledger);

enum class VerifyResult { Unchanged, Changed, Unavailable };

VerifyResult verify_unchanged(const std::string& url, const std::string& expected_hash,
                              const FetchPolicy& policy, HttpTransport& transport);

struct FetchRunOptions {
    std::filesystem::path urls_file;
    std::filesystem::path output_dir;
    FetchPolicy policy;
    std::size_t workers = 32;
    HttpTransport* transport = nullptr;  // required
    bool deterministic_timestamps = false;
};

struct FetchRunStats {
    std::size_t requests = 0;
    std::size_t stored = 0;
    std::size_t failed = 0;
    std::map<std::string, std::size_t> rejected_by_kind;

    std::size_t total_rejected() const;
};

// Pool of fetch workers writing private journals, merged in input order:
//   docs/<hh>/<hash>.docx|.doc   content-addressed store
//   fetch_journal.jsonl          one FetchOutcome per line
//   fetch_stats.json
FetchRunStats run_fetch(const FetchRunOptions& options);

}  // namespace dh::fetch
