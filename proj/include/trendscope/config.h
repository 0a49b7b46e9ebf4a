#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace trendscope {

/// Flat `key = value` configuration. Every tunable of the pipeline has a default;
/// files and command-line flags override them. Lines starting with '#' are comments.
class Config {
public:
    /// A config populated with every default.
    static Config defaults();

    /// Defaults overlaid with the keys found in `path`. Unknown keys are a usage error.
    static Config load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    /// Comma-separated list; empty value gives an empty list.
    std::vector<std::string> get_list(const std::string& key) const;

    /// Keys with a given prefix, e.g. `cluster_name.` overrides.
    std::map<std::string, std::string> with_prefix(const std::string& prefix) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    /// Serialized `key = value` lines in key order.
    std::string dump() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace trendscope
