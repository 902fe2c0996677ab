#include "trionlab/result_cache.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace trionlab::cache {

std::uint64_t fnv1a(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value)
{
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, value >>= 4) out[i] = digits[value & 0xf];
    return out;
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ResultCache::entry_path(const std::string& key) const { return dir_ / (key + ".json"); }

std::optional<std::string> ResultCache::load(const std::string& key, const std::string& config,
                                             std::ostream& warn) const
{
    const auto path = entry_path(key);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        const auto j = nlohmann::json::parse(buf.str());
        if (j.at("key").get<std::string>() != key || j.at("config").get<std::string>() != config)
            throw std::runtime_error("key mismatch");
        const std::string output = j.at("output").get<std::string>();
        if (hex64(fnv1a(output)) != j.at("checksum").get<std::string>())
            throw std::runtime_error("checksum mismatch");
        return output;
    } catch (const std::exception& e) {
        warn << "warning: ignoring corrupt cache entry " << path.string() << " (" << e.what() << ")\n";
        return std::nullopt;
    }
}

void ResultCache::store(const std::string& key, const std::string& config, const std::string& output) const
{
    std::filesystem::create_directories(dir_);
    nlohmann::json j;
    j["key"] = key;
    j["config"] = config;
    j["checksum"] = hex64(fnv1a(output));
    j["output"] = output;
    const auto path = entry_path(key);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << j.dump(1) << '\n';
        if (!out) throw std::runtime_error("cannot write cache entry " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

} // namespace trionlab::cache
