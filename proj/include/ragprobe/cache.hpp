#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ragprobe/common.hpp"

namespace ragprobe {

/// What the cache remembers about one model interaction: enough to replay
/// the run byte-for-byte without contacting the model again.
struct CacheEntry {
    std::string raw_reply;
    std::string model_name;
    std::string timestamp;
};

/// Stable key for one run request. Any input that could change the reply is
/// part of the key, so a prompt edit or evidence change always misses.
inline std::string run_cache_key(const std::string& example_id, const std::string& condition,
                                 const std::string& hardness, const std::string& position,
                                 const std::string& model_name,
                                 const std::string& prompt_version,
                                 const std::vector<std::string>& provided_ids) {
    std::string material = example_id;
    material += '\x1f';
    material += condition;
    material += '\x1f';
    material += hardness;
    material += '\x1f';
    material += position;
    material += '\x1f';
    material += model_name;
    material += '\x1f';
    material += prompt_version;
    for (const auto& id : provided_ids) {
        material += '\x1f';
        material += id;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(material)));
    return buf;
}

/// Append-only JSON-Lines cache of raw model replies. The whole file is
/// loaded at construction, so lookups are lock-free reads; writes append a
/// line under a mutex. Malformed or foreign-schema lines are skipped with a
/// warning rather than failing the run.
class RunCache {
public:
    static constexpr int kSchemaVersion = 1;

    explicit RunCache(const std::filesystem::path& dir) : path_(dir / "runs.jsonl") {
        std::filesystem::create_directories(dir);
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            const auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("key") ||
                !j.contains("raw_reply") || j.value("schema_version", 0) != kSchemaVersion) {
                log_warn("cache: skipping unreadable line " + std::to_string(lineno) + " in " +
                         path_.string());
                continue;
            }
            CacheEntry e;
            e.raw_reply = j["raw_reply"].get<std::string>();
            e.model_name = j.value("model", "");
            e.timestamp = j.value("timestamp", "");
            entries_[j["key"].get<std::string>()] = std::move(e);
        }
    }

    std::optional<CacheEntry> find(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void put(const std::string& key, const CacheEntry& entry) {
        std::lock_guard<std::mutex> lock(write_mutex_);
        if (entries_.count(key)) return;
        entries_[key] = entry;
        nlohmann::json j;
        j["schema_version"] = kSchemaVersion;
        j["key"] = key;
        j["raw_reply"] = entry.raw_reply;
        j["model"] = entry.model_name;
        j["timestamp"] = entry.timestamp;
        std::ofstream out(path_, std::ios::app);
        out << j.dump() << "\n";
    }

    size_t size() const { return entries_.size(); }
    const std::filesystem::path& file() const { return path_; }

private:
    std::filesystem::path path_;
    std::map<std::string, CacheEntry> entries_;
    std::mutex write_mutex_;
};

}  // namespace ragprobe
