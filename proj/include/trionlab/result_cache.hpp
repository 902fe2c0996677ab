#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace trionlab::cache {

std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t value);

/// Content-addressed store of command outputs: <dir>/<key>.json holding the canonical
/// configuration and the exact output text.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir);

    /// Stored output for key, or nothing. Unreadable or mismatching entries produce a
    /// warning on `warn` and count as a miss.
    std::optional<std::string> load(const std::string& key, const std::string& config, std::ostream& warn) const;
    void store(const std::string& key, const std::string& config, const std::string& output) const;

    std::filesystem::path entry_path(const std::string& key) const;

private:
    std::filesystem::path dir_;
};

} // namespace trionlab::cache
