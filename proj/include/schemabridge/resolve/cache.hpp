#pragma once

#include "schemabridge/core/registry.hpp"
#include "schemabridge/detect/mismatch.hpp"
#include "schemabridge/resolve/adapter.hpp"
#include "schemabridge/resolve/mapping.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace schemabridge {

/// Map whose missing values are computed at most once however many callers
/// ask concurrently. A failed computation is forgotten, so the next caller
/// retries, and every caller waiting on it sees the same exception.
template <class Key, class Value, class Hash = std::hash<Key>>
class SingleFlight {
public:
    using Ptr = std::shared_ptr<const Value>;

    struct Result {
        Ptr value;
        bool hit = false;  // false only for the caller that ran `compute`
    };

    template <class Compute>
    Result get_or_compute(const Key& key, Compute&& compute) {
        std::promise<Ptr> promise;
        std::shared_future<Ptr> future;
        bool owner = false;
        {
            std::lock_guard lock(mutex_);
            auto it = slots_.find(key);
            if (it != slots_.end()) {
                future = it->second;
            } else {
                future = promise.get_future().share();
                slots_.emplace(key, future);
                owner = true;
            }
        }
        if (!owner) return {future.get(), true};

        try {
            Ptr value = std::make_shared<const Value>(compute());
            promise.set_value(value);
            return {std::move(value), false};
        } catch (...) {
            {
                std::lock_guard lock(mutex_);
                slots_.erase(key);
            }
            promise.set_exception(std::current_exception());
            throw;
        }
    }

    /// Ready value for `key`, without waiting on an in-flight computation.
    [[nodiscard]] Ptr find(const Key& key) const {
        std::lock_guard lock(mutex_);
        auto it = slots_.find(key);
        if (it == slots_.end() || !ready(it->second)) return nullptr;
        try {
            return it->second.get();
        } catch (...) {
            return nullptr;
        }
    }

    /// Stores `value`, replacing any ready entry.
    void put(const Key& key, Value value) {
        std::promise<Ptr> promise;
        promise.set_value(std::make_shared<const Value>(std::move(value)));
        std::lock_guard lock(mutex_);
        slots_.insert_or_assign(key, promise.get_future().share());
    }

    void clear() {
        std::lock_guard lock(mutex_);
        slots_.clear();
    }

    [[nodiscard]] std::size_t size() const {
        std::lock_guard lock(mutex_);
        return slots_.size();
    }

    /// Ready entries only.
    [[nodiscard]] std::vector<std::pair<Key, Ptr>> snapshot() const {
        std::lock_guard lock(mutex_);
        std::vector<std::pair<Key, Ptr>> out;
        for (const auto& [k, f] : slots_) {
            if (!ready(f)) continue;
            try {
                out.emplace_back(k, f.get());
            } catch (...) {
            }
        }
        return out;
    }

private:
    static bool ready(const std::shared_future<Ptr>& f) {
        return f.wait_for(std::chrono::seconds(0)) == std::future_status::ready;
    }

    mutable std::mutex mutex_;
    std::unordered_map<Key, std::shared_future<Ptr>, Hash> slots_;
};

struct MappingRecord {
    SchemaMapping mapping;
    std::chrono::system_clock::time_point created_at;
};

struct CacheEntry {
    SchemaMapping mapping;
    std::shared_ptr<const ValidatedAdapter> adapter;  // CODEGEN routes only
    std::chrono::system_clock::time_point created_at;
};

/// Everything the pipeline learns once per schema pair: the merged
/// detection report, the mapping and the validated adapter. Keyed by the
/// pair of canonical schema hashes.
class MappingCache {
public:
    SingleFlight<SchemaPair, MismatchReport, SchemaPairHasher> reports;
    SingleFlight<SchemaPair, MappingRecord, SchemaPairHasher> mappings;
    SingleFlight<SchemaPair, ValidatedAdapter, SchemaPairHasher> adapters;

    [[nodiscard]] std::optional<CacheEntry> entry(const SchemaPair& pair) const;

    void clear();

    /// Writes mappings and adapters as one JSON document.
    void save(const std::filesystem::path& file) const;
    /// Restores entries whose schema pair belongs to a route of `registry`;
    /// adapters are re-checked statically. Returns the number of mappings
    /// restored. A missing file restores nothing.
    std::size_t load(const std::filesystem::path& file, const SchemaRegistry& registry);
};

} // namespace schemabridge
