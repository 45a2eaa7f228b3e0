#include "schemabridge/middleware/server.hpp"

#include <httplib.h>

namespace schemabridge {

ProxyServer::ProxyServer(std::shared_ptr<const Middleware> middleware)
    : middleware_(std::move(middleware)), server_(std::make_unique<httplib::Server>()) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest in;
        in.method = req.method;
        in.target = req.target.empty() ? req.path : req.target;
        for (const auto& [k, v] : req.headers) {
            if (k == "REMOTE_ADDR" || k == "REMOTE_PORT" || k == "LOCAL_ADDR" || k == "LOCAL_PORT") continue;
            in.headers.emplace_back(k, v);
        }
        in.body = req.body;
        const HttpResponse out = middleware_->handle(in);
        res.status = out.status;
        std::string content_type = "application/octet-stream";
        for (const auto& [k, v] : out.headers) {
            if (find_header({{k, v}}, "Content-Type")) content_type = v;
            else res.set_header(k, v);
        }
        res.set_content(out.body, content_type);
    };
    const std::string any = ".*";
    server_->Get(any, handler);
    server_->Post(any, handler);
    server_->Put(any, handler);
    server_->Patch(any, handler);
    server_->Delete(any, handler);
    server_->Options(any, handler);
    // SO_REUSEPORT would let a second proxy silently share the port.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
}

ProxyServer::~ProxyServer() { stop(); }

int ProxyServer::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool ProxyServer::serve() { return server_->listen_after_bind(); }

void ProxyServer::stop() {
    if (server_) server_->stop();
}

bool ProxyServer::running() const { return server_->is_running(); }

void ProxyServer::wait_until_ready() const { server_->wait_until_ready(); }

} // namespace schemabridge
