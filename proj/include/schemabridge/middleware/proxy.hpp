#pragma once

#include "schemabridge/middleware/metrics.hpp"
#include "schemabridge/middleware/pipeline.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace schemabridge {

using HeaderList = std::vector<std::pair<std::string, std::string>>;

struct HttpRequest {
    std::string method;
    std::string target;  // path plus query string, as received
    HeaderList headers;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    HeaderList headers;
    std::string body;
};

/// Sends a request to `service` (host:port or a URL origin). Throws
/// TransportError when the backend cannot be reached.
using Forwarder = std::function<HttpResponse(const std::string& service, const HttpRequest& request)>;

/// Forwarder over plain HTTP(S) connections.
[[nodiscard]] Forwarder http_forwarder(std::chrono::seconds timeout = std::chrono::seconds(30));

[[nodiscard]] bool is_transformable_method(std::string_view method);

/// Header value by case-insensitive name.
[[nodiscard]] std::optional<std::string> find_header(const HeaderList& headers, std::string_view name);

/// The interception layer. Registered POST/PUT/PATCH requests are run
/// through the pipeline and the new body goes to the route's target
/// service; everything else is forwarded untouched. The backend's response
/// is returned as received.
class Middleware {
public:
    Middleware(std::shared_ptr<const Pipeline> pipeline, Forwarder forward, std::string default_upstream = {},
               std::shared_ptr<MetricsSink> metrics = nullptr);

    [[nodiscard]] HttpResponse handle(const HttpRequest& request) const;

    [[nodiscard]] const Pipeline& pipeline() const noexcept { return *pipeline_; }
    [[nodiscard]] MetricsSink* metrics() const noexcept { return metrics_.get(); }

private:
    [[nodiscard]] HttpResponse forward(const std::string& service, const HttpRequest& request,
                                       RequestRecord& record) const;
    [[nodiscard]] std::string upstream_for(std::string_view path) const;

    std::shared_ptr<const Pipeline> pipeline_;
    Forwarder forward_;
    std::string default_upstream_;
    std::shared_ptr<MetricsSink> metrics_;
};

} // namespace schemabridge
