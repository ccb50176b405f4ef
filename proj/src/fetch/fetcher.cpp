#include "dh/fetch/fetcher.hpp"

#include <chrono>
#include <fstream>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "dh/core/error.hpp"
#include "dh/core/fsutil.hpp"
#include "dh/core/sha256.hpp"
#include "dh/core/thread_pool.hpp"
#include "dh/harvest/url.hpp"

namespace dh::fetch {

namespace {

std::int64_t now_unix() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::optional<std::string> header_value(const HttpResponse& r, const std::string& key) {
    auto it = r.headers.find(key);
    if (it == r.headers.end()) return std::nullopt;
    return it->second;
}

// Fixed per-host politeness delay shared by the fetch workers.
class HostThrottle {
public:
    explicit HostThrottle(int delay_ms) : delay_(delay_ms) {}

    void wait_turn(const std::string& url) {
        if (delay_.count() <= 0) return;
        auto parsed = harvest::parse_url(url);
        if (!parsed) return;
        std::chrono::steady_clock::time_point wake;
        {
            std::lock_guard lock(mu_);
            auto now = std::chrono::steady_clock::now();
            auto& next_allowed = next_[parsed->host];
            wake = std::max(now, next_allowed);
            next_allowed = wake + delay_;
        }
        std::this_thread::sleep_until(wake);
    }

private:
    std::chrono::milliseconds delay_;
    std::mutex mu_;
    std::unordered_map<std::string, std::chrono::steady_clock::time_point> next_;
};

}  // namespace

bool ContentLedger::admit(const std::string& hex_hash) {
    std::lock_guard lock(mu_);
    return hashes_.insert(hex_hash).second;
}

bool ContentLedger::contains(const std::string& hex_hash) const {
    std::lock_guard lock(mu_);
    return hashes_.count(hex_hash) > 0;
}

std::size_t ContentLedger::size() const {
    std::lock_guard lock(mu_);
    return hashes_.size();
}

void ContentLedger::save(const std::filesystem::path& file) const {
    std::string out;
    {
        std::lock_guard lock(mu_);
        for (const auto& h : hashes_) {
            out += h;
            out += '\n';
        }
    }
    fs::write_file(file, out);
}

void ContentLedger::load(const std::filesystem::path& file) {
    if (!std::filesystem::exists(file)) return;
    std::lock_guard lock(mu_);
    for (auto& line : fs::read_lines(file))
        if (!line.empty()) hashes_.insert(line);
}

FetchOutcome fetch_document(const std::string& url, const FetchPolicy& policy,
                            HttpTransport& transport, Bytes* body_out) {
    FetchOutcome outcome;
    outcome.url = url;
    outcome.fetched_at = now_unix();

    auto parsed = harvest::parse_url(url);
    if (!parsed || parsed->host.empty() ||
        (parsed->scheme != "http" && parsed->scheme != "https")) {
        outcome.status = FetchStatus::Rejected;
        outcome.reason = {RejectionKind::InvalidUrl, "unparsable or non-http url"};
        return outcome;
    }

    std::string current = url;
    int redirects = 0;
    TransportResult result;
    for (;;) {
        int attempts = 0;
        for (;;) {
            result = transport.get(current, policy);
            if (result.ok() || result.error == TransportError::TooLarge) break;
            if (++attempts > policy.max_retries) {
                outcome.status = FetchStatus::Failed;
                outcome.reason = {RejectionKind::NoResponse, result.detail};
                return outcome;
            }
        }
        if (result.error == TransportError::TooLarge) {
            outcome.status = FetchStatus::Rejected;
            outcome.reason = {RejectionKind::TooLarge, result.detail};
            return outcome;
        }
        int code = result.response.status;
        if (code >= 300 && code < 400) {
            auto location = header_value(result.response, "Location");
            if (!location) {
                outcome.status = FetchStatus::Rejected;
                outcome.http_code = code;
                outcome.reason = {RejectionKind::HttpCode, "redirect without Location"};
                return outcome;
            }
            if (++redirects > policy.max_redirects) {
                outcome.status = FetchStatus::Rejected;
                outcome.http_code = code;
                outcome.reason = {RejectionKind::RetryRedirect,
                                  "redirect chain exceeds " + std::to_string(policy.max_redirects)};
                return outcome;
            }
            auto base = harvest::parse_url(current);
            auto ref = harvest::parse_url(*location);
            if (!base || !ref) {
                outcome.status = FetchStatus::Rejected;
                outcome.reason = {RejectionKind::InvalidUrl, "bad redirect target"};
                return outcome;
            }
            current = harvest::normalize_url(harvest::resolve_reference(*base, *ref));
            continue;
        }
        break;
    }

    outcome.http_code = result.response.status;
    if (result.response.status != 200) {
        outcome.status = FetchStatus::Rejected;
        outcome.reason = {RejectionKind::HttpCode, std::to_string(result.response.status)};
        return outcome;
    }

    const Bytes& body = result.response.body;
    if (body.size() > policy.max_bytes) {
        outcome.status = FetchStatus::Rejected;
        outcome.reason = {RejectionKind::TooLarge, std::to_string(body.size()) + " bytes"};
        return outcome;
    }
    // Hash the full response bytes before any other check.
    outcome.byte_hash = Sha256::hex_digest(body);
    outcome.content_length = body.size();

    BytesView prefix(body.data(), std::min<std::size_t>(body.size(), 8));
    auto decision = check_content_type(header_value(result.response, "Content-Type"), prefix, policy);
    if (!decision_accepts(decision)) {
        outcome.status = FetchStatus::Rejected;
        outcome.byte_hash.reset();
        if (decision == ContentDecision::RejectContentType) {
            outcome.reason = {RejectionKind::ContentType,
                              header_value(result.response, "Content-Type").value_or("")};
        } else {
            outcome.reason = {RejectionKind::WrongFileFormat, "magic bytes not a Word document"};
        }
        return outcome;
    }
    outcome.magic_override = decision == ContentDecision::AcceptMagicOverride;

    MaldocFlags flags;
    try {
        flags = maldoc_screen(body);
    } catch (const UnparsableContainer& e) {
        outcome.status = FetchStatus::Rejected;
        outcome.byte_hash.reset();
        outcome.reason = {RejectionKind::WrongFileFormat, e.what()};
        return outcome;
    }
    if (flags.any()) {
        std::string detail;
        if (flags.has_vba) detail += "vba,";
        if (flags.has_external_relations) detail += "external_relations,";
        if (flags.has_ole_object_pool) detail += "object_pool,";
        if (flags.is_encrypted) detail += "encrypted,";
        if (flags.has_flash) detail += "flash,";
        if (!detail.empty()) detail.pop_back();
        outcome.status = FetchStatus::Rejected;
        outcome.byte_hash.reset();
        outcome.reason = {RejectionKind::Maldoc, detail};
        return outcome;
    }

    outcome.status = FetchStatus::Stored;
    if (body_out) *body_out = std::move(result.response.body);
    return outcome;
}

FetchOutcome dedup_by_hash(FetchOutcome outcome, ContentLedger& ledger) {
    if (outcome.status != FetchStatus::Stored || !outcome.byte_hash) return outcome;
    if (!ledger.admit(*outcome.byte_hash)) {
        outcome.status = FetchStatus::Rejected;
        outcome.reason = {RejectionKind::DuplicateContent, *outcome.byte_hash};
        outcome.stored_path.reset();
    }
    return outcome;
}

VerifyResult verify_unchanged(const std::string& url, const std::string& expected_hash,
                              const FetchPolicy& policy, HttpTransport& transport) {
    FetchOutcome refetch = fetch_document(url, policy, transport);
    if (refetch.status == FetchStatus::Failed ||
        (refetch.status == FetchStatus::Rejected && !refetch.byte_hash))
        return VerifyResult::Unavailable;
    if (refetch.byte_hash && *refetch.byte_hash == expected_hash) return VerifyResult::Unchanged;
    return VerifyResult::Changed;
}

std::size_t FetchRunStats::total_rejected() const {
    std::size_t n = 0;
    for (const auto& [_, c] : rejected_by_kind) n += c;
    return n;
}

FetchRunStats run_fetch(const FetchRunOptions& options) {
    namespace stdfs = std::filesystem;
    FetchRunStats stats;
    if (!options.transport) throw Error("run_fetch: transport is required");

    std::vector<std::string> urls;
    for (auto& line : fs::read_lines(options.urls_file))
        if (!line.empty()) urls.push_back(line);
    stats.requests = urls.size();

    stdfs::path docs_dir = options.output_dir / "docs";
    stdfs::create_directories(docs_dir);
    ContentLedger ledger;
    ledger.load(options.output_dir / "content.ledger");

    // Workers fill outcomes indexed by input position; the journal merge keeps
    // input order. Ledger admission is the atomic check-and-insert deciding
    // which worker writes the content-addressed file.
    HostThrottle throttle(options.policy.per_host_delay_ms);
    std::vector<FetchOutcome> outcomes(urls.size());
    parallel_for_each(urls.size(), options.workers, [&](std::size_t i) {
        try {
            throttle.wait_turn(urls[i]);
            Bytes body;
            FetchOutcome o = fetch_document(urls[i], options.policy, *options.transport, &body);
            if (o.status == FetchStatus::Stored) {
                o = dedup_by_hash(std::move(o), ledger);
                if (o.status == FetchStatus::Stored) {
                    const std::string& hash = *o.byte_hash;
                    const char* ext = sniff_body_format(BytesView(
                                          body.data(), std::min<std::size_t>(body.size(), 8))) ==
                                              BodyFormat::LegacyDoc
                                          ? ".doc"
                                          : ".docx";
                    std::string rel = "docs/" + hash.substr(0, 2) + "/" + hash + ext;
                    fs::write_file(options.output_dir / rel, body);
                    o.stored_path = rel;
                }
            }
            outcomes[i] = std::move(o);
        } catch (const std::exception& e) {
            // Storage or hardware trouble, not a transport problem.
            FetchOutcome o;
            o.url = urls[i];
            o.fetched_at = now_unix();
            o.status = FetchStatus::Rejected;
            o.reason = {RejectionKind::Internal, e.what()};
            outcomes[i] = std::move(o);
        }
    });

    std::ofstream journal(options.output_dir / "fetch_journal.jsonl", std::ios::trunc);
    for (auto& o : outcomes) {
        if (options.deterministic_timestamps) o.fetched_at = 0;
        if (o.status == FetchStatus::Stored) ++stats.stored;
        else if (o.status == FetchStatus::Failed) ++stats.failed;
        else ++stats.rejected_by_kind[to_string(o.reason.kind)];
        journal << outcome_to_jsonl(o) << "\n";
    }
    journal.close();
    ledger.save(options.output_dir / "content.ledger");

    nlohmann::json j{{"requests", stats.requests},
                     {"stored", stats.stored},
                     {"failed", stats.failed},
                     {"rejected", stats.rejected_by_kind}};
    fs::write_file(options.output_dir / "fetch_stats.json", j.dump(2) + "\n");
    return stats;
}

}  // namespace dh::fetch
