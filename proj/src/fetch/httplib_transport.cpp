#include <algorithm>
#include <cctype>

#include <httplib.h>

#include "dh/fetch/transport.hpp"
#include "dh/harvest/url.hpp"

namespace dh::fetch {

bool CaseInsensitiveLess::operator()(const std::string& a, const std::string& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](unsigned char x, unsigned char y) {
                                            return std::tolower(x) < std::tolower(y);
                                        });
}

namespace {

class HttplibTransport final : public HttpTransport {
public:
    TransportResult get(const std::string& url, const FetchPolicy& policy) override {
        TransportResult result;
        auto parsed = harvest::parse_url(url);
        if (!parsed || parsed->host.empty()) {
            result.error = TransportError::Connection;
            result.detail = "unparsable url";
            return result;
        }
        std::string scheme = parsed->scheme;
        std::transform(scheme.begin(), scheme.end(), scheme.begin(),
                       [](unsigned char c) { return std::tolower(c); });
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        if (scheme == "https") {
            result.error = TransportError::Connection;
            result.detail = "built without TLS support";
            return result;
        }
#endif
        std::string origin = scheme + "://" + parsed->host;
        if (!parsed->port.empty()) origin += ":" + parsed->port;
        httplib::Client client(origin);
        client.set_follow_location(false);
        client.set_connection_timeout(policy.timeout_seconds, 0);
        client.set_read_timeout(policy.timeout_seconds, 0);
        client.set_write_timeout(policy.timeout_seconds, 0);
        client.set_default_headers({{"User-Agent", policy.user_agent}});
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
        client.enable_server_certificate_verification(false);
#endif

        std::string target = parsed->path.empty() ? "/" : parsed->path;
        if (!parsed->query.empty()) target += "?" + parsed->query;

        Bytes body;
        bool too_large = false;
        httplib::Result res = client.Get(
            target,
            [&](const char* data, std::size_t len) {
                if (body.size() + len > policy.max_bytes) {
                    too_large = true;
                    return false;  // abort download
                }
                body.insert(body.end(), reinterpret_cast<const std::uint8_t*>(data),
                            reinterpret_cast<const std::uint8_t*>(data) + len);
                return true;
            });

        if (too_large) {
            result.error = TransportError::TooLarge;
            result.detail = "body exceeds max_bytes";
            return result;
        }
        if (!res) {
            auto err = res.error();
            result.error = (err == httplib::Error::ConnectionTimeout ||
                            err == httplib::Error::Read || err == httplib::Error::Write)
                               ? TransportError::Timeout
                               : TransportError::Connection;
            result.detail = httplib::to_string(err);
            return result;
        }
        result.response.status = res->status;
        for (const auto& [k, v] : res->headers) result.response.headers[k] = v;
        result.response.body = std::move(body);
        return result;
    }
};

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport() {
    return std::make_unique<HttplibTransport>();
}

}  // namespace dh::fetch
