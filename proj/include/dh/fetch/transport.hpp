#pragma once

#include <map>
#include <memory>
#include <string>

#include "dh/core/bytes.hpp"
#include "dh/fetch/outcome.hpp"

namespace dh::fetch {

struct CaseInsensitiveLess {
    bool operator()(const std::string& a, const std::string& b) const;
};

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string, CaseInsensitiveLess> headers;
    Bytes body;
};

enum class TransportError { None, Timeout, Connection, TooLarge };

struct TransportResult {
    TransportError error = TransportError::None;
    HttpResponse response;
    std::string detail;

    bool ok() const { return error == TransportError::None; }
};

// Single-request HTTP client. Implementations do not follow redirects; the
// fetcher owns the redirect chain so hop counts stay observable. Bodies are
// cut off at policy.max_bytes and reported as TooLarge.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual TransportResult get(const std::string& url, const FetchPolicy& policy) = 0;
};

// Production transport backed by cpp-httplib (HTTPS when built with TLS).
std::unique_ptr<HttpTransport> make_httplib_transport();

}  // namespace dh::fetch
