#include "schemabridge/resolve/cache.hpp"

#include <fstream>

namespace schemabridge {

std::optional<CacheEntry> MappingCache::entry(const SchemaPair& pair) const {
    const auto record = mappings.find(pair);
    if (!record) return std::nullopt;
    return CacheEntry{record->mapping, adapters.find(pair), record->created_at};
}

void MappingCache::clear() {
    reports.clear();
    mappings.clear();
    adapters.clear();
}

void MappingCache::save(const std::filesystem::path& file) const {
    json entries = json::array();
    for (const auto& [pair, record] : mappings.snapshot()) {
        json e = {{"source_hash", pair.first.hex()},
                  {"target_hash", pair.second.hex()},
                  {"created_at", std::chrono::duration_cast<std::chrono::seconds>(
                                     record->created_at.time_since_epoch())
                                     .count()},
                  {"mapping", to_json(record->mapping)}};
        if (const auto adapter = adapters.find(pair)) e["adapter"] = to_json(adapter->program());
        entries.push_back(std::move(e));
    }
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write cache file " + tmp);
        out << json{{"entries", entries}}.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, file);
}

std::size_t MappingCache::load(const std::filesystem::path& file, const SchemaRegistry& registry) {
    std::ifstream in(file);
    if (!in) return 0;
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("entries")) throw ConfigError("cache file is corrupt: " + file.string());

    std::size_t restored = 0;
    for (const auto& e : doc.at("entries")) {
        const SchemaPair pair{SchemaHash::from_hex(e.at("source_hash").get<std::string>()),
                              SchemaHash::from_hex(e.at("target_hash").get<std::string>())};
        const RouteConfig* route = nullptr;
        for (const auto& r : registry.routes) {
            if (r.schema_pair() == pair) route = &r;
        }
        if (!route) continue;
        try {
            SchemaMapping mapping = mapping_from_json(e.at("mapping"), pair);
            const auto created = std::chrono::system_clock::time_point(std::chrono::seconds(e.value("created_at", 0)));
            if (e.contains("adapter")) {
                adapters.put(pair, restore_adapter(adapter_from_json(e.at("adapter")), *route->source_schema,
                                                   *route->target_schema));
            }
            mappings.put(pair, MappingRecord{std::move(mapping), created});
            ++restored;
        } catch (const Error&) {
            // A stale entry is dropped and regenerated on demand.
        }
    }
    return restored;
}

} // namespace schemabridge
