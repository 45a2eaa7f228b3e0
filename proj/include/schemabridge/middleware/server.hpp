#pragma once

#include "schemabridge/middleware/proxy.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace schemabridge {

/// HTTP front end for a Middleware; every method and path is handled.
class ProxyServer {
public:
    explicit ProxyServer(std::shared_ptr<const Middleware> middleware);
    ~ProxyServer();
    ProxyServer(const ProxyServer&) = delete;
    ProxyServer& operator=(const ProxyServer&) = delete;

    /// Binds to `port` (0 picks a free one) and returns the bound port, or
    /// -1 on failure.
    int bind(const std::string& host, int port);
    /// Blocks serving requests until stop().
    bool serve();
    void stop();
    [[nodiscard]] bool running() const;
    void wait_until_ready() const;

private:
    std::shared_ptr<const Middleware> middleware_;
    std::unique_ptr<httplib::Server> server_;
};

} // namespace schemabridge
