#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>

#include "dh/core/bytes.hpp"

namespace dh::test {

// Loopback HTTP server for fetch tests; everything stays on this machine.
class FixtureServer {
public:
    FixtureServer() {
        server_ = std::make_unique<httplib::Server>();
        server_->Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lock(mu_);
            auto it = routes_.find(req.path);
            if (it == routes_.end()) {
                res.status = 404;
                res.set_content("not found", "text/plain");
                return;
            }
            it->second(req, res);
        });
        port_ = server_->bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_->listen_after_bind(); });
        server_->wait_until_ready();
    }

    ~FixtureServer() {
        server_->stop();
        if (thread_.joinable()) thread_.join();
    }

    int port() const { return port_; }

    std::string url_for(const std::string& path) const {
        return "http://127.0.0.1:" + std::to_string(port_) + path;
    }

    void serve_bytes(const std::string& path, Bytes bytes,
                     const std::string& content_type =
                         "application/vnd.openxmlformats-officedocument.wordprocessingml."
                         "document") {
        std::lock_guard lock(mu_);
        routes_[path] = [bytes = std::move(bytes), content_type](const httplib::Request&,
                                                                 httplib::Response& res) {
            res.set_content(std::string(bytes.begin(), bytes.end()), content_type);
        };
    }

    void serve_status(const std::string& path, int status) {
        std::lock_guard lock(mu_);
        routes_[path] = [status](const httplib::Request&, httplib::Response& res) {
            res.status = status;
            res.set_content("status fixture", "text/plain");
        };
    }

    void serve_redirect(const std::string& path, const std::string& location) {
        std::lock_guard lock(mu_);
        routes_[path] = [location](const httplib::Request&, httplib::Response& res) {
            res.status = 302;
            res.set_header("Location", location);
        };
    }

    // Alternates between two payloads call by call (poisoning-defense tests).
    void serve_alternating(const std::string& path, Bytes first, Bytes second) {
        auto counter = std::make_shared<std::atomic<int>>(0);
        std::lock_guard lock(mu_);
        routes_[path] = [first = std::move(first), second = std::move(second),
                         counter](const httplib::Request&, httplib::Response& res) {
            const Bytes& pick = counter->fetch_add(1) % 2 == 0 ? first : second;
            res.set_content(std::string(pick.begin(), pick.end()),
                            "application/vnd.openxmlformats-officedocument.wordprocessingml."
                            "document");
        };
    }

    void serve_custom(const std::string& path,
                      std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        std::lock_guard lock(mu_);
        routes_[path] = std::move(handler);
    }

private:
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    std::mutex mu_;
    std::map<std::string, std::function<void(const httplib::Request&, httplib::Response&)>>
        routes_;
};

}  // namespace dh::test
