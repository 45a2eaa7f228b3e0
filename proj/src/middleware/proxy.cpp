#include "schemabridge/middleware/proxy.hpp"

#include "schemabridge/llm/errors.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

namespace schemabridge {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

// Connection-level headers that the outgoing client sets for itself.
bool hop_by_hop(std::string_view name) {
    static constexpr std::string_view names[] = {"host",    "content-length", "connection", "transfer-encoding",
                                                 "keep-alive", "te",          "trailer",    "upgrade",
                                                 "proxy-connection"};
    return std::any_of(std::begin(names), std::end(names), [&](std::string_view n) { return iequals(n, name); });
}

HttpResponse error_response(int status, const std::string& message) {
    return {status, {{"Content-Type", "application/json"}}, json{{"error", message}}.dump()};
}

std::string_view path_of(std::string_view target) { return target.substr(0, target.find('?')); }

} // namespace

bool is_transformable_method(std::string_view method) { return method_from_string(method).has_value(); }

std::optional<std::string> find_header(const HeaderList& headers, std::string_view name) {
    for (const auto& [k, v] : headers) {
        if (iequals(k, name)) return v;
    }
    return std::nullopt;
}

Forwarder http_forwarder(std::chrono::seconds timeout) {
    return [timeout](const std::string& service, const HttpRequest& request) {
        httplib::Client client(service);
        const auto secs = static_cast<time_t>(timeout.count());
        client.set_connection_timeout(secs, 0);
        client.set_read_timeout(secs, 0);
        client.set_write_timeout(secs, 0);

        httplib::Request req;
        req.method = request.method;
        req.path = request.target;
        for (const auto& [k, v] : request.headers) {
            if (!hop_by_hop(k)) req.headers.emplace(k, v);
        }
        req.body = request.body;

        auto result = client.send(req);
        if (!result) throw TransportError("cannot reach " + service + ": " + httplib::to_string(result.error()));
        HttpResponse out;
        out.status = result->status;
        for (const auto& [k, v] : result->headers) {
            if (!hop_by_hop(k)) out.headers.emplace_back(k, v);
        }
        out.body = result->body;
        return out;
    };
}

Middleware::Middleware(std::shared_ptr<const Pipeline> pipeline, Forwarder forward, std::string default_upstream,
                       std::shared_ptr<MetricsSink> metrics)
    : pipeline_(std::move(pipeline)), forward_(std::move(forward)), default_upstream_(std::move(default_upstream)),
      metrics_(std::move(metrics)) {
    if (!pipeline_ || !forward_) throw ConfigError("middleware needs a pipeline and a forwarder");
}

std::string Middleware::upstream_for(std::string_view path) const {
    const RouteConfig* best = nullptr;
    for (const char* m : {"POST", "PUT", "PATCH"}) {
        const RouteConfig* r = match_route(pipeline_->registry(), m, path);
        if (r && (!best || r->path_pattern.size() > best->path_pattern.size())) best = r;
    }
    return best ? best->target_service : default_upstream_;
}

HttpResponse Middleware::forward(const std::string& service, const HttpRequest& request, RequestRecord& record) const {
    if (service.empty()) {
        record.error = "no upstream configured";
        return error_response(502, "no upstream configured for " + request.target);
    }
    try {
        return forward_(service, request);
    } catch (const std::exception& e) {
        record.error = e.what();
        return error_response(502, std::string("backend unreachable: ") + e.what());
    }
}

HttpResponse Middleware::handle(const HttpRequest& request) const {
    RequestRecord rec;
    rec.method = request.method;
    rec.path = request.target;
    rec.timestamp_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();

    const RouteConfig* route = nullptr;
    if (is_transformable_method(request.method)) {
        route = match_route(pipeline_->registry(), request.method, request.target);
        const auto type = find_header(request.headers, "Content-Type");
        if (route && type && type->find("json") == std::string::npos) route = nullptr;
    }

    HttpResponse response;
    if (!route) {
        rec.outcome = Outcome::Passthrough;
        response = forward(upstream_for(path_of(request.target)), request, rec);
    } else {
        rec.route = route->path_pattern;
        const json body = json::parse(request.body, nullptr, false);
        if (body.is_discarded() || !body.is_object()) {
            rec.outcome = Outcome::Rejected;
            rec.error = body.is_discarded() ? "request body is not valid JSON" : "request body is not a JSON object";
            response = error_response(400, rec.error);
        } else {
            json output;
            try {
                PipelineResult r = pipeline_->process(*route, body);
                output = std::move(r.output);
                r.record.method = rec.method;
                r.record.path = rec.path;
                r.record.timestamp_ms = rec.timestamp_ms;
                rec = std::move(r.record);
            } catch (const std::exception& e) {
                output = body;
                rec.outcome = Outcome::Degraded;
                rec.error = e.what();
            }
            HttpRequest out{request.method, request.target, {}, output.dump()};
            for (const auto& h : request.headers) {
                if (!iequals(h.first, "Content-Type") && !iequals(h.first, "Content-Length")) out.headers.push_back(h);
            }
            out.headers.emplace_back("Content-Type", "application/json");
            response = forward(route->target_service, out, rec);
        }
    }
    rec.status = response.status;
    if (metrics_) metrics_->record(rec);
    return response;
}

} // namespace schemabridge
