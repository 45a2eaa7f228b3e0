#include "schemabridge/core/registry.hpp"

#include "schemabridge/core/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace schemabridge {

std::optional<Method> method_from_string(std::string_view text) {
    if (text == "POST") return Method::Post;
    if (text == "PUT") return Method::Put;
    if (text == "PATCH") return Method::Patch;
    return std::nullopt;
}

std::string_view to_string(Method m) {
    switch (m) {
    case Method::Post: return "POST";
    case Method::Put: return "PUT";
    case Method::Patch: return "PATCH";
    }
    return "POST";
}

std::string_view to_string(Strategy s) { return s == Strategy::Direct ? "DIRECT" : "CODEGEN"; }

std::optional<Strategy> strategy_from_string(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "DIRECT") return Strategy::Direct;
    if (upper == "CODEGEN") return Strategy::Codegen;
    return std::nullopt;
}

void SchemaRegistry::add(RouteConfig route) {
    for (const auto& existing : routes) {
        if (existing.path_pattern != route.path_pattern) continue;
        for (auto m : route.methods) {
            if (existing.methods.contains(m)) {
                throw ConfigError("duplicate route " + std::string(to_string(m)) + " " + route.path_pattern);
            }
        }
    }
    routes.push_back(std::move(route));
}

namespace {

bool prefixes(std::string_view pattern, std::string_view path) {
    if (!path.starts_with(pattern)) return false;
    if (path.size() == pattern.size()) return true;
    return pattern.ends_with('/') || path[pattern.size()] == '/';
}

} // namespace

const RouteConfig* match_route(const SchemaRegistry& registry, std::string_view method, std::string_view path) {
    const auto m = method_from_string(method);
    if (!m) return nullptr;
    if (auto q = path.find('?'); q != std::string_view::npos) {
        path = path.substr(0, q);
    }
    const RouteConfig* best = nullptr;
    for (const auto& route : registry.routes) {
        if (!route.methods.contains(*m)) continue;
        if (route.path_pattern == path) return &route;
        if (prefixes(route.path_pattern, path) &&
            (best == nullptr || route.path_pattern.size() > best->path_pattern.size())) {
            best = &route;
        }
    }
    return best;
}

namespace {

std::shared_ptr<const Schema> load_schema_value(const json& value, const std::filesystem::path& base_dir,
                                                const std::string& where) {
    try {
        if (value.is_object()) {
            return std::make_shared<const Schema>(schema_from_json(value));
        }
        if (value.is_string()) {
            std::filesystem::path file = value.get<std::string>();
            if (file.is_relative()) file = base_dir / file;
            std::ifstream in(file);
            if (!in) {
                throw ConfigError(where + ": cannot open schema file " + file.string());
            }
            std::stringstream buf;
            buf << in.rdbuf();
            try {
                return std::make_shared<const Schema>(parse_schema(buf.str()));
            } catch (const Error& e) {
                throw ConfigError(where + ": schema file " + file.string() + ": " + e.what());
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": expected inline schema object or file path");
}

} // namespace

SchemaRegistry load_registry(const json& document, const std::filesystem::path& base_dir) {
    if (!document.is_object() || !document.contains("routes") || !document["routes"].is_array()) {
        throw ConfigError("registry config must be an object with a 'routes' array");
    }
    SchemaRegistry registry;
    const auto& routes = document["routes"];
    for (std::size_t i = 0; i < routes.size(); ++i) {
        const auto& r = routes[i];
        const std::string where = "routes[" + std::to_string(i) + "]";
        if (!r.is_object()) throw ConfigError(where + ": route must be an object");
        RouteConfig route;
        if (!r.contains("path") || !r["path"].is_string() || r["path"].get<std::string>().empty()) {
            throw ConfigError(where + ".path: missing path");
        }
        route.path_pattern = r["path"].get<std::string>();
        if (auto it = r.find("methods"); it != r.end()) {
            if (!it->is_array()) throw ConfigError(where + ".methods: must be an array");
            for (const auto& m : *it) {
                auto parsed = m.is_string() ? method_from_string(m.get<std::string>()) : std::nullopt;
                if (!parsed) throw ConfigError(where + ".methods: unsupported method " + m.dump());
                route.methods.insert(*parsed);
            }
        } else {
            route.methods = {Method::Post, Method::Put, Method::Patch};
        }
        if (route.methods.empty()) throw ConfigError(where + ".methods: empty");
        if (!r.contains("source_schema")) throw ConfigError(where + ".source_schema: missing");
        if (!r.contains("target_schema")) throw ConfigError(where + ".target_schema: missing");
        route.source_schema = load_schema_value(r["source_schema"], base_dir, where + ".source_schema");
        route.target_schema = load_schema_value(r["target_schema"], base_dir, where + ".target_schema");
        route.source_service = r.value("source_service", std::string{});
        route.target_service = r.value("target_service", std::string{});
        const auto strategy = r.value("strategy", std::string("CODEGEN"));
        auto s = strategy_from_string(strategy);
        if (!s) throw ConfigError(where + ".strategy: must be DIRECT or CODEGEN, got " + strategy);
        route.strategy = *s;
        if (auto it = r.find("safeguards"); it != r.end()) {
            if (!it->is_boolean()) throw ConfigError(where + ".safeguards: must be boolean");
            route.safeguards_enabled = it->get<bool>();
        }
        if (auto it = r.find("min_confidence"); it != r.end()) {
            if (!it->is_number() || it->get<double>() < 0.0 || it->get<double>() > 1.0) {
                throw ConfigError(where + ".min_confidence: must be a number in [0,1]");
            }
            route.min_confidence = it->get<double>();
        }
        try {
            registry.add(std::move(route));
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    if (auto it = document.find("units"); it != document.end()) {
        if (!it->is_array()) throw ConfigError("units: must be an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& u = (*it)[i];
            const std::string where = "units[" + std::to_string(i) + "]";
            if (!u.is_object() || !u.contains("from") || !u.contains("to") || !u.contains("scale")) {
                throw ConfigError(where + ": needs from, to, scale");
            }
            UnitDefinition def{u["from"].get<std::string>(), u["to"].get<std::string>(), u["scale"].get<double>(),
                               u.value("offset", 0.0)};
            if (def.scale == 0.0) throw ConfigError(where + ": scale must be non-zero");
            registry.units.push_back(std::move(def));
        }
    }
    return registry;
}

SchemaRegistry load_registry_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open registry config " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("registry config " + file.string() + ": " + e.what());
    }
    return load_registry(doc, file.parent_path());
}

} // namespace schemabridge
